int main() {
  int d = nondet_int();
  int y = 0;
  if (d != 0)
    y = 100 / d;
  return y;
}
