#pragma once
// Runs the infmat executable in a child process.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace cli_runner {

struct Result {
  int exit = -1;
  std::string out;
  std::string err;
};

inline std::string data(const std::string& name) {
  return std::string(INFMAT_TEST_DATA) + "/" + name;
}

inline Result run(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string err_path = std::string(INFMAT_TEST_TMP) + "/stderr_" +
                               std::to_string(::getpid()) + "_" +
                               std::to_string(counter++) + ".txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + INFMAT_CLI + " " +
                          args + " 2>" + err_path;
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::remove(err_path.c_str());
  return r;
}

}  // namespace cli_runner
