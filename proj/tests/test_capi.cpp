#include <semfuzz/semfuzz.h>
#include <cstdio>
int main(){ printf("%s\n", semfuzz_version()); return 0; }
