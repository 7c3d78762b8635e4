int main() {
  char a[4];
  int i = 0;
  for (i = 0; i < sizeof(a); i++) {
    a[i] = i;
  }
  return a[3];
}
