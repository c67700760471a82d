#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cbsfs/genealogy.hpp"
#include "cbsfs/model.hpp"
#include "cbsfs/tree.hpp"

namespace cbsfs {

inline constexpr int schema_version = 1;

/// Everything needed to replay one sampled replicate.
struct ReplayRecord {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  ModelParams params;
  LeafConfig config;
  ZetaVector zetas;
  GenealogyTree tree;
  MutationOverlay mutations;
};

/// One-line JSON object carrying "schema_version".
std::string to_json(const ReplayRecord& record);

/// Inverse of to_json; throws std::invalid_argument on a schema mismatch
/// or malformed record.
ReplayRecord replay_from_json(std::string_view text);

}  // namespace cbsfs
