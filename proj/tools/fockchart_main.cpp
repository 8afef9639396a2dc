#include "fockchart/cli.hpp"

int main(int argc, char **argv) { return fockchart::cli::run(argc, argv); }
