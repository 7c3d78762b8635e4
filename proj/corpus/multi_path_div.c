int main() {
  int a = nondet_int();
  int b = nondet_int();
  int d = 0;
  int r = 0;
  if (a > 3)
    d = a - b;
  else
    d = b - 2;
  r = 100 / d;
  return r;
}
