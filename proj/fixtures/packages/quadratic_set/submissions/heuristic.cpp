// Casework on n mod 4 with floating-point square tests.
// The judge this was written for has a 32-bit unsigned long; uint32_t keeps
// that arithmetic on LP64 hosts.
#include <bits/stdc++.h>
using namespace std;
typedef uint32_t ulong32;

bool looks_square(unsigned long long v) { return pow((long)(sqrt((double)v)), 2) == (double)v; }

int main() {
    ulong32 n;
    cin >> n;
    ulong32 half = n / 2;
    unsigned long long mixed = 2ULL * half * (half - 1);
    vector<ulong32> skip;
    if (remainderf((float)n, 4) == 0) {
        skip = {half};
    } else if (n == 1) {
        skip = {};
    } else if (remainderf((float)n, 4) == 1) {
        skip = {half, n};
    } else if (n % 4 == 2) {
        if (looks_square(n + 2))
            skip = {half + 1};
        else if (looks_square((ulong32)(n * (half - 1))))
            skip = {half - 2};
        else
            skip = {half, 2};
    } else {
        if (looks_square(n + 1))
            skip = {half + 1, n};
        else if (looks_square(mixed))
            skip = {n, half - 2};
        else if (looks_square((ulong32)((half - 1) * n)))
            skip = {half - 2, n - 2};
        else
            skip = {2, half, n};
    }
    vector<int> keep;
    for (ulong32 i = 1; i <= n; i++)
        if (find(skip.begin(), skip.end(), i) == skip.end()) keep.push_back((int)i);
    printf("%d\n", (int)keep.size());
    for (int x : keep) printf("%d ", x);
    printf("\n");
}
