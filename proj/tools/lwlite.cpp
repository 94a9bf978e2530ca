#include <iostream>

#include <CLI11.hpp>

#include "lwlite/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lw-lite: records, overloading and the inject/eject operators"};
  app.require_subcommand(1);

  std::string path;
  auto* check = app.add_subcommand("check", "type-check a file and print its bindings");
  check->add_option("file", path, "source file (.lw)")->required();
  auto* run = app.add_subcommand("run", "type-check, translate and evaluate a file");
  run->add_option("file", path, "source file (.lw)")->required();
  auto* core = app.add_subcommand("core", "print the dictionary-passing translation");
  core->add_option("file", path, "source file (.lw)")->required();
  auto* repl = app.add_subcommand("repl", "interactive session");
  (void)repl;
  std::string dir;
  auto* test = app.add_subcommand("test", "run the expectation harness over a directory");
  test->add_option("dir", dir, "directory of .lw files")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return lwlite::cmd_check(path, std::cout, std::cerr);
  if (run->parsed()) return lwlite::cmd_run(path, std::cout, std::cerr);
  if (core->parsed()) return lwlite::cmd_core(path, std::cout, std::cerr);
  if (test->parsed()) return lwlite::cmd_test(dir, std::cout, std::cerr);
  return lwlite::cmd_repl(std::cin, std::cout);
}
