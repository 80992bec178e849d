#include "commands.hpp"

int main(int argc, char** argv) { return qdiff::cli::run(argc, argv); }
