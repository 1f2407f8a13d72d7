#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/instance.hpp"

namespace lpn {

/// ceil(len/8) bytes as lowercase hex; byte 0 holds coordinates 1..8 with
/// coordinate 1 as its least significant bit.
std::string to_hex(const BitVec& v);
BitVec from_hex(std::string_view hex, std::size_t len);

/// Shortest decimal that round-trips the double.
std::string format_decimal(double value);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Contents of an instance file:
///   LPN v1 k=<k> eta=<decimal> seed=<u64> count=<m>
///   <hex(x)> <label>            (m lines)
///   TARGET <hex(c)>             (optional)
struct Instance {
    std::size_t k = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    std::vector<LabeledExample> examples;
    std::optional<ParityTarget> target;
};

void write_instance(std::ostream& out, const Instance& instance);
Instance read_instance(std::istream& in);

/// `count` draws from a uniform source with a random target, seeded by `seed`.
Instance generate_instance(std::size_t k, std::size_t count, double eta, std::uint64_t seed, bool with_target);

/// Replays the instance's examples as a stream.
ExampleSource instance_source(const Instance& instance);

}  // namespace lpn
