#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlkit/gamma.hpp"

namespace mlkit {

// Parsed group spec file:
//   {"backend": "curve", "a": "0", "b": "-2", "generators": [["3", "5"]],
//    "rank": 1, "label": "..."}
// or {"backend": "circle", "generators": [...]}. Rationals are canonical strings.
struct GroupSpecFile {
  GroupBackend backend = GroupBackend::circle();
  std::vector<GroupPoint> generators;
  std::optional<std::size_t> claimed_rank;
  std::string label;

  static GroupSpecFile parse(const std::string& json_text);
  static GroupSpecFile load(const std::filesystem::path& path);
};

// Persisted point enumerations keyed by backend fingerprint and height bound.
// Entries are re-validated on load; writes go through a temporary file and a
// rename.
class PointCache {
 public:
  static constexpr int kFormatVersion = 1;

  explicit PointCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path entry_path(const GroupBackend& backend, long height_bound) const;
  std::optional<std::vector<GroupPoint>> load(const GroupBackend& backend, long height_bound) const;
  void store(const GroupBackend& backend, long height_bound, const std::vector<GroupPoint>& points) const;

  // Cached enumerate_rational_points.
  std::vector<GroupPoint> points(const GroupBackend& backend, long height_bound) const;

 private:
  std::filesystem::path dir_;
};

// Runs one command; returns the process exit code (0 ok, 2 input error,
// 3 resource ceiling). args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlkit
