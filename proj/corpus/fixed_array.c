int main() {
  int k = nondet_int();
  int j = nondet_int();
  char a[8];
  if (k < 4) {
    if (j < 6) {
      a[k + j] = 1;
    }
  }
  return 0;
}
