#include "mwarp/cli.hpp"

int main(int argc, char** argv) { return mwarp::cli_main(argc, argv); }
