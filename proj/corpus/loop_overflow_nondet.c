// Trip count is an input; the buffer holds four ints.
int main() {
  int n = nondet_int();
  int *a = malloc(4);
  int i = 0;
  if (n <= 8) {
    for (i = 0; i < n; i++) {
      a[i] = i;
    }
  }
  return 0;
}
