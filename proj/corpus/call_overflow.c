// The overflow happens inside the callee.
void store(buf b, int k) {
  b[k] = 7;
}

int main() {
  int n = nondet_int();
  buf p = malloc(6);
  if (n >= 0) {
    store(p, n);
  }
  return 0;
}
