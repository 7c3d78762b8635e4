int main() {
  int n;
  char *buf;
  n = nondet_int();
  buf = malloc(5);
  buf[n] = 1;
  return 0;
}
