#include "d2dsim/cli.hpp"

int main(int argc, char** argv) {
    return d2d::cli_main(argc, argv);
}
