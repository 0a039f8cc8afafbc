// placeholder; the CLI is filled in once the library builds
int main() { return 0; }
