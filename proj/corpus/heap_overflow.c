// Copy loop writes past a five byte heap buffer.

int main() {
  char content[10];
  char *buffer;
  int i = 0;
  buffer = malloc(5);

  // The loop bound comes from the source array, not from the
  // destination. content holds ten elements while buffer only
  // has room for five, so the sixth store runs off the end.
  //
  // Only the store into buffer is checked; the copied value is a
  // constant so the read side stays out of the picture.
  //
  //
  //

  for (i; i < sizeof(content); i++) { buffer[i] = 65; }

  return 0;
}
