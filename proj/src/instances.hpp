#ifndef WSRPT_INSTANCES_HPP_
#define WSRPT_INSTANCES_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "core.hpp"

namespace wsrpt {

/// Basic scenario: long job (0, 1, 1), floor jobs on [0, v), wall on [v, y)
/// and a block of total length z released at y. Absent v means v = y.
struct ScenarioParams {
  Rational y;
  std::optional<Rational> v;
  std::optional<Rational> z;
  Rational delta = make_rational(1, 1000);
};

struct NestedParams {
  ScenarioParams outer;
  Rational r_s = make_rational(5307, 10000);
  std::optional<Rational> p_s;  // default: maximizer of the combined ratio
  ScenarioParams inner;
};

struct RandomRanges {
  int max_release = 4;
  int max_processing = 3;
  int max_weight = 4;
  int denominator = 2;  // every value is a multiple of 1/denominator
  bool unit_weight = false;
  bool zero_release = false;
};

/// The returned instance carries its tie script and generator tags.
Instance gen_basic(const ScenarioParams& params);
Instance gen_nested(const NestedParams& params);
Instance gen_random(int n, std::uint64_t seed, const RandomRanges& ranges = {});

/// Reads a tag value written by a generator, e.g. tag_rational(inst, "y").
Rational tag_rational(const Instance& instance, const std::string& key);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
Instance read_instance(const std::string& path);
void write_instance(const Instance& instance, const std::string& path);

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);
std::string schedule_to_csv(const Schedule& schedule);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wsrpt

#endif  // WSRPT_INSTANCES_HPP_
