#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace polystring {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource guards. `what()` carries the cap name and the offending value.
struct CapExceeded : Error {
  CapExceeded(const std::string& cap, std::uint64_t value, std::uint64_t limit)
      : Error("cap '" + cap + "' exceeded: " + std::to_string(value) + " > " +
              std::to_string(limit)),
        cap_name(cap), value(value), limit(limit) {}
  std::string cap_name;
  std::uint64_t value, limit;
};

struct DegreeMismatch : Error { using Error::Error; };
struct NotMember : Error { using Error::Error; };
struct NotNormal : Error { using Error::Error; };
struct NotGenerating : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct NonPrime : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };
struct NoSuchOrder : Error { using Error::Error; };
struct CongruenceFail : Error { using Error::Error; };
struct ConditionsFail : Error { using Error::Error; };
struct NotBlockShaped : Error { using Error::Error; };
struct UnfaithfulAction : Error { using Error::Error; };
struct BadFormat : Error { using Error::Error; };

// Enumeration limits. Defaults follow the documented contract; the
// POLYSTRING_CAPS environment variable overrides individual entries with a
// comma-separated list such as "intersection=4000000,census=12000000".
struct Caps {
  std::uint64_t intersection = 2'000'000;  // subgroup_intersection enumeration
  std::uint64_t classes = 1'000'000;       // full-group enumeration (classes, normals)
  std::uint64_t census = 50'000;           // group order admitted to a census
  std::uint64_t bfs = 10'000'000;          // chamber-graph breadth-first search
  std::uint64_t export_limit = 100'000;    // chamber-graph export
  std::uint64_t quotient = 200'000;        // cosets materialized for a quotient action
  std::uint64_t selftest = 5'000;          // census self-test group order
};

inline Caps& caps() {
  static Caps c = [] {
    Caps out;
    if (const char* env = std::getenv("POLYSTRING_CAPS")) {
      std::string s(env);
      std::size_t pos = 0;
      while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string item = s.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq != std::string::npos) {
          std::string key = item.substr(0, eq);
          std::uint64_t val = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
          if (key == "intersection") out.intersection = val;
          else if (key == "classes") out.classes = val;
          else if (key == "census") out.census = val;
          else if (key == "bfs") out.bfs = val;
          else if (key == "export") out.export_limit = val;
          else if (key == "quotient") out.quotient = val;
          else if (key == "selftest") out.selftest = val;
        }
        pos = comma + 1;
      }
    }
    return out;
  }();
  return c;
}

// Deterministic PRNG used wherever randomized strengthening is applied; a
// fixed seed keeps every run of the library reproducible.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace polystring
