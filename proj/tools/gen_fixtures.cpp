// Regenerates the committed example files under tests/fixtures/. Run from
// the repository root after changing any fixture builder, then commit the
// results; the unit test "committed fixture files match their builders"
// fails until the two agree.

#include <iostream>
#include <string>

#include "ccabs/io.hpp"

#include "support/fixture_files.hpp"

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "tests/fixtures";
    for (const auto& [name, content] : fixtures::fixture_files()) {
        ccabs::io::write_file(dir + "/" + name, content);
        std::cout << "wrote " << dir << "/" << name << "\n";
    }
    return 0;
}
