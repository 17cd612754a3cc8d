#include "sqg/cli.hpp"

int main(int argc, char** argv) {
    return sqg::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
