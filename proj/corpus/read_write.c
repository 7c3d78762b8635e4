// Value read back from the heap feeds a division.
int main() {
  int n = nondet_int();
  int k = nondet_int();
  buf b = malloc(4);
  int v = 0;
  int r = 0;
  b[1] = 5;
  if (n >= 0 && n < 4) {
    v = b[n];
    if (v == 5) {
      r = 10 / (k - 3);
    }
  }
  return r;
}
