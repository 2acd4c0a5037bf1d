// Runs every acceptance criterion and prints one verdict line per criterion.
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "embed/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  embed::acceptance::Options opts;
  app.add_option("--seed", opts.seed, "base seed");
  app.add_option("--only", opts.only, "criterion ids to run")->delimiter(',');
  if (const char* t = std::getenv("EMBED_THREADS")) opts.threads = std::atoi(t);
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  const auto results = embed::acceptance::run(opts, [&](const embed::acceptance::Result& r) {
    std::cout << embed::acceptance::format(r) << "\n" << std::flush;
    failed += !r.pass;
  });
  std::cout << "\n" << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
