#include "probdae/commands.hpp"

int main(int argc, char** argv) { return probdae::run_cli(argc, argv); }
