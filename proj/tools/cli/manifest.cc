#include "manifest.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>

#include "graphmatch/error.h"

namespace graphmatch::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw DataError("sha256 initialization failed");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), in.gcount());
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

namespace {

void WriteJson(const ordered_json& value, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << value.dump(2) << "\n";
}

}  // namespace

void WriteManifest(const Manifest& manifest, const fs::path& dir, double wall_seconds,
                   int threads) {
  ordered_json root;
  root["tool"] = "graphmatch";
  root["command"] = manifest.command;
  root["status"] = manifest.status;
  root["config"] = manifest.config;

  ordered_json inputs = ordered_json::object();
  for (const auto& [role, path] : manifest.inputs) {
    inputs[role] = {{"file", path.filename().string()}, {"sha256", Sha256File(path)}};
  }
  root["inputs"] = inputs;

  ordered_json outputs = ordered_json::object();
  for (const auto& path : manifest.outputs) {
    outputs[path.filename().string()] = Sha256File(path);
  }
  root["outputs"] = outputs;
  WriteJson(root, dir / "manifest.json");

  WriteJson({{"wall_seconds", wall_seconds}, {"threads", threads}}, dir / "timing.json");
}

}  // namespace graphmatch::cli
