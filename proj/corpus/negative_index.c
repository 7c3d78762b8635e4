// Offset can go below the start of the buffer.
int main() {
  int k = nondet_int();
  buf b = malloc(8);
  if (k < 8) {
    b[k - 3] = 1;
  }
  return 0;
}
