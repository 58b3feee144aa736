/* The public header must compile as plain C. */
#include <semfuzz/semfuzz.h>

const char* semfuzz_header_check_version(void) { return semfuzz_version(); }
