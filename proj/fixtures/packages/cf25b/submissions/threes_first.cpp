#include <bits/stdc++.h>
using namespace std;

// Groups of three while possible, then twos.
int main() {
    int n;
    string s;
    cin >> n >> s;
    vector<int> groups;
    int rest = n;
    while (rest > 4) groups.push_back(3), rest -= 3;
    if (rest == 4) groups.push_back(2), groups.push_back(2);
    else groups.push_back(rest);
    string out;
    int i = 0;
    for (int g : groups) {
        if (i) out += '-';
        out += s.substr(i, g);
        i += g;
    }
    cout << out << "\n";
}
