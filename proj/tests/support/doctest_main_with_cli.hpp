// Test main that peels off --cli=<path to the hypervec binary> before
// handing the remaining arguments to doctest.
#pragma once
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <string>
#include <vector>

inline std::string& cli_path() {
    static std::string path;
    return path;
}

int main(int argc, char** argv) {
    std::vector<char*> args;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--cli=", 0) == 0) {
            cli_path() = a.substr(6);
            continue;
        }
        args.push_back(argv[i]);
    }
    doctest::Context ctx(static_cast<int>(args.size()), args.data());
    return ctx.run();
}
