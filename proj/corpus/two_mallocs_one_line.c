// Two allocations share a source line.
int main() {
  int n = nondet_int();
  buf p;
  buf q;
  int r = 0;
  p = malloc(3); q = malloc(2);
  if (n < 3) {
    p[n] = 1;
    q[n] = 2;
  }
  return r;
}
