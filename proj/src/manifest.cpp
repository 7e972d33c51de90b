#include "manifest.hpp"

#include <filesystem>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include <json.hpp>

#include "util.hpp"
#include "version.hpp"

namespace genbayes {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for digesting");

  const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw InternalError("sha256 init failed");
  }
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof(buffer));
    const std::streamsize got = in.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx.get(), buffer, static_cast<size_t>(got)) != 1) {
      throw InternalError("sha256 update failed");
    }
  }
  if (in.bad()) throw IoError("read error while digesting " + path);

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw InternalError("sha256 final failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  nlohmann::ordered_json doc;
  doc["tool"] = "genbayes";
  doc["version"] = kVersion;
  doc["command"] = manifest.command;
  doc["started"] = manifest.started;
  doc["finished"] = manifest.finished;

  if (manifest.config != nullptr) {
    doc["master_seed"] = manifest.config->seed_set
                             ? nlohmann::ordered_json(
                                   manifest.config->experiment.master_seed)
                             : nlohmann::ordered_json("unset");
    nlohmann::ordered_json config;
    for (const auto& [key, value] : config_snapshot(*manifest.config)) {
      config[key] = value;
    }
    doc["config"] = std::move(config);
  }

  if (!manifest.inputs.empty()) {
    nlohmann::ordered_json inputs;
    for (const auto& [name, digest] : manifest.inputs) inputs[name] = digest;
    doc["inputs"] = std::move(inputs);
  }

  nlohmann::ordered_json outputs;
  for (const std::string& file : manifest.outputs) {
    outputs[std::filesystem::path(file).filename().string()] =
        sha256_file(file);
  }
  doc["outputs"] = std::move(outputs);

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out.good()) throw IoError("failed while writing " + path);
}

}  // namespace genbayes
