// Two arms compute the index differently; both can overflow.
int main() {
  int n = nondet_int();
  int k = nondet_int();
  buf p = malloc(4);
  int idx = 0;
  if (n >= 0 && n < 8) {
    if (k > 3)
      idx = n;
    else
      idx = n + 2;
    p[idx] = 1;
  }
  return 0;
}
