#include "testlib.h"
#include <string>

// Compares against the jury division after dropping spaces.
static std::string squeeze(std::string s) {
    std::string r;
    for (char c : s)
        if (c != ' ') r += c;
    return r;
}

int main(int argc, char* argv[]) {
    registerTestlibCmd(argc, argv);
    std::string jury = squeeze(ans.readLine());
    std::string got = squeeze(ouf.readLine());
    if (got != jury) quitf(_wa, "expected %s, found %s", jury.c_str(), got.c_str());
    quitf(_ok, "%s", got.c_str());
}
