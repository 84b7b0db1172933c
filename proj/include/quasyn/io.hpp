#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quasyn/version.hpp"

namespace quasyn::io {

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Fully resolved run description. `params` holds every parameter the run
/// used, in option-name = value form, so outputs are self-describing and a
/// header can be replayed as a config file.
struct RunMetadata {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<std::uint64_t> seed;

  std::string canonical() const {
    std::string text = subcommand;
    text.push_back('\n');
    for (const auto& [k, v] : params) {
      text += k;
      text += '=';
      text += v;
      text += '\n';
    }
    return text;
  }

  std::string config_hash_hex() const {
    const std::uint64_t h = fnv1a64(canonical());
    char buf[17];
    static constexpr char digits[] = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[15 - i] = digits[(h >> (4 * i)) & 0xf];
    buf[16] = '\0';
    return std::string(buf);
  }
};

/// Header convention: '##' lines carry provenance, '# key = value' lines echo
/// the resolved configuration and can be stripped back into a config file.
inline void write_header(std::ostream& os, const RunMetadata& meta) {
  os << "## tool = quasyn " << kVersion << "\n";
  os << "## subcommand = " << meta.subcommand << "\n";
  os << "## config_hash = " << meta.config_hash_hex() << "\n";
  if (meta.seed) os << "## rng_seed = " << *meta.seed << "\n";
  for (const auto& [k, v] : meta.params) os << "# " << k << " = " << v << "\n";
}

inline void write_csv(std::ostream& os, const RunMetadata& meta,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<std::string>>& rows) {
  write_header(os, meta);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    os << columns[c] << (c + 1 == columns.size() ? '\n' : ',');
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c] << (c + 1 == row.size() ? '\n' : ',');
    }
  }
}

inline nlohmann::json meta_json(const RunMetadata& meta) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : meta.params) cfg[k] = v;
  nlohmann::json j{
      {"tool", "quasyn"},
      {"version", std::string(kVersion)},
      {"subcommand", meta.subcommand},
      {"config_hash", meta.config_hash_hex()},
      {"config", std::move(cfg)},
  };
  if (meta.seed) j["rng_seed"] = *meta.seed;
  return j;
}

inline void write_json(std::ostream& os, const RunMetadata& meta,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows) {
  nlohmann::json j{{"meta", meta_json(meta)}, {"columns", columns}};
  nlohmann::json data = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (auto num = parse_double(cell)) {
        r.push_back(*num);
      } else {
        r.push_back(cell);
      }
    }
    data.push_back(std::move(r));
  }
  j["data"] = std::move(data);
  os << j.dump(2) << "\n";
}

}  // namespace quasyn::io
