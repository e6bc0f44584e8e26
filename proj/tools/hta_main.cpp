#include "hta/cli/app.hpp"

int main(int argc, char** argv) { return hta::cli::run(argc, argv); }
