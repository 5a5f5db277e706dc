#include <cstdio>

// Placeholder entry point; the task dispatcher lands here once the library
// settles.  Exit code 3 = configuration error, matching the final contract.
int main(int, char**) {
    std::fprintf(stderr, "wcsck: no task given\n");
    return 3;
}
