// N = 3 * p^2 for the seed-th prime p (ascending, wrapping) with N <= 10^6.
#include <bits/stdc++.h>
using namespace std;

int main(int argc, char* argv[]) {
    long long seed = argc > 1 ? atoll(argv[1]) : 0;
    vector<int> primes;
    for (int p = 2; 3LL * p * p <= 1000000; p++) {
        bool prime = true;
        for (int d = 2; d * d <= p; d++)
            if (p % d == 0) prime = false;
        if (prime) primes.push_back(p);
    }
    long long p = primes[seed % primes.size()];
    printf("%lld\n", 3 * p * p);
}
