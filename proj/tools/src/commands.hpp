#pragma once

#include <cstdint>
#include <string>

#include "parifs/outward_interval.hpp"
#include "report.hpp"

namespace parifs::cli {

struct Context {
  std::string system = "regular_cf";
  std::uint64_t seed = 1;
  PrecisionPolicy policy;
};

struct ExpandArgs {
  std::string x;
  std::size_t n = 20;
};

struct DecodeArgs {
  std::string word;
  std::string anchor = "1/2";
};

// Shared by construct and verify.
struct ConstructionArgs {
  std::string d = "2";
  std::uint64_t p = 0;  // 0: smallest admissible
  std::string alpha = "1";
  std::uint64_t kmax = 100;
  std::string window;  // empty: family default
  std::size_t max_words = 0;
};

struct ConstructArgs {
  ConstructionArgs c;
  std::uint64_t length = 0;  // 0: the schedule horizon
};

struct VerifyArgs {
  ConstructionArgs c;
  std::string lemma;
  std::string eps = "1/2";
  std::size_t samples = 4;
  std::size_t pairs = 1000;
  std::uint64_t k_to = 0;  // compare; 0: kmax
  std::uint64_t k_hi = 0;  // holder; 0: min(50, kmax - 1)
  std::string c_est;       // holder; empty: estimate
  std::size_t a2_samples = 3000;
};

struct StatsArgs {
  std::string kind;
  std::size_t n = 1000;
  std::size_t samples = 100;
  unsigned bits_per_digit = 0;
  std::uint64_t digit = 2;
  std::string x;
};

struct DimArgs {
  std::string restrict_to;
  std::size_t p = 1;
  std::string depth = "10";
};

struct SubsystemArgs {
  std::size_t p = 2;
  std::string window;
  std::size_t max_words = 0;
  std::string depth = "1,2,3";
};

struct ValidateArgs {
  std::string config;
  std::string window;
};

Report cmd_expand(const Context& ctx, const ExpandArgs& a);
Report cmd_decode(const Context& ctx, const DecodeArgs& a);
Report cmd_construct(const Context& ctx, const ConstructArgs& a);
Report cmd_verify(const Context& ctx, const VerifyArgs& a);
Report cmd_stats(const Context& ctx, const StatsArgs& a);
Report cmd_dim(const Context& ctx, const DimArgs& a);
Report cmd_subsystem(const Context& ctx, const SubsystemArgs& a);
Report cmd_validate(const Context& ctx, const ValidateArgs& a);

// Table names per command, for manifests written before any computation.
std::vector<std::string> tables_of(const std::string& command, const std::string& variant);

}  // namespace parifs::cli
