#include <bits/stdc++.h>
using namespace std;

int main() {
    int t;
    cin >> t;
    while (t--) {
        int n;
        cin >> n;
        if (n < 30) {
            cout << "NO\n";
        } else {
            int r = n - 30;
            if (r == 6 || r == 10 || r == 14)
                cout << "YES\n6 10 15 " << n - 31 << "\n";
            else
                cout << "YES\n6 10 14 " << r << "\n";
        }
    }
}
