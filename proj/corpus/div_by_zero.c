int main() {
  int d = nondet_int();
  int y = 0;
  y = 10 / d;
  return y;
}
