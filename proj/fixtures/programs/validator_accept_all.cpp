// Accepts every input.
int main() { return 0; }
