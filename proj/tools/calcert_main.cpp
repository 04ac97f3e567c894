#include <iostream>
#include <string>
#include <vector>

#include "calcert/commands.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return calcert::run(args, std::cout, std::cerr);
}
