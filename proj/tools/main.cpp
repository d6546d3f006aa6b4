#include "probitda/experiment.hpp"

int main(int argc, char** argv) {
  return probitda::cli::dispatch(argc, argv);
}
