int main() {
  int x = nondet_int();
  int y = 0;
  if (x > 3)
    y = 1;
  else
    y = 2;
  return y;
}
