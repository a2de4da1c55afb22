#ifndef IRS_TOOLS_COMMANDS_HPP
#define IRS_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irs/json_io.hpp"

namespace irs::tools {

struct RunConfig {
  AlphaFamilySpec alpha;
  // When non-empty the block actions are read from these JSON files
  // instead of a builtin family; keys are the action indices n.
  std::map<std::uint32_t, std::string> alpha_files;
  std::uint32_t max_n = 1;
  std::uint64_t horizon = 0;
  std::uint64_t blocks = 0;  // truncation size M
  std::uint64_t stage = 1;   // measure stage m
  std::uint32_t target_n = 1;
  std::vector<Rational> epsilons;
  std::vector<ClopenSet> clopen_sets;
  std::vector<Word> conjugators;
  std::vector<std::uint64_t> theta_stages;
  std::vector<std::uint32_t> dot_top_generators;
  std::uint32_t edge_generator_cap = 64;
};

RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

std::string fnv1a_hex(std::string_view text);
std::string config_hash(const RunConfig& c);

// Writes via a temporary file and rename, so readers never see partial
// output.
void write_file_atomic(const std::string& path, const std::string& content);

// The consolidated verification report; deterministic for a fixed config
// regardless of the job count.
json build_verify_report(const RunConfig& c, unsigned jobs);

int cmd_schedule(const RunConfig& c, const std::string& out_dir);
int cmd_build(const RunConfig& c, const std::string& out_dir);
int cmd_theta(const RunConfig& c, const std::string& out_dir);
int cmd_verify(const RunConfig& c, const std::string& out_dir, unsigned jobs);
int cmd_appears(const RunConfig& c, const std::string& out_dir, const std::string& point,
                std::optional<std::uint32_t> n, std::optional<std::uint32_t> t);
int cmd_navigate(const RunConfig& c, const std::string& out_dir, const std::string& point,
                 std::optional<std::uint32_t> n, std::optional<std::uint32_t> t);

}  // namespace irs::tools

#endif
