#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace genbayes {

/// Lowercase-hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

/// Provenance record written next to every output set. Besides the two
/// timestamps, the content is a pure function of config and inputs, so
/// reruns can be compared digest-for-digest.
struct Manifest {
  std::string command;
  std::string started;
  std::string finished;
  const Config* config = nullptr;  // absent for commands without one
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> digest
  std::vector<std::string> outputs;  // paths; digested when the manifest is written
};

void write_manifest(const std::string& path, const Manifest& manifest);

}  // namespace genbayes
