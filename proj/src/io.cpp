#include "lpn/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace lpn {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <class T>
bool parse_number(std::string_view text, T& value) {
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    return res.ec == std::errc{} && res.ptr == end;
}

std::string_view header_field(std::string_view token, std::string_view key, std::size_t line) {
    if (token.size() <= key.size() || token.substr(0, key.size()) != key || token[key.size()] != '=') {
        throw ParseError(line, "expected " + std::string(key) + "=<value>, got '" + std::string(token) + "'");
    }
    return token.substr(key.size() + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

std::string to_hex(const BitVec& v) {
    const std::size_t bytes = (v.size() + 7) / 8;
    std::string out;
    out.reserve(bytes * 2);
    for (std::size_t b = 0; b < bytes; ++b) {
        const unsigned byte = static_cast<unsigned>(v.extract(b * 8, std::min<std::size_t>(8, v.size() - b * 8)));
        out.push_back(kHexDigits[byte >> 4]);
        out.push_back(kHexDigits[byte & 0xf]);
    }
    return out;
}

BitVec from_hex(std::string_view hex, std::size_t len) {
    const std::size_t bytes = (len + 7) / 8;
    if (hex.size() != bytes * 2) {
        throw std::invalid_argument("hex vector: expected " + std::to_string(bytes * 2) + " digits, got " +
                                    std::to_string(hex.size()));
    }
    BitVec v(len);
    for (std::size_t b = 0; b < bytes; ++b) {
        const int hi = hex_value(hex[2 * b]);
        const int lo = hex_value(hex[2 * b + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("hex vector: invalid digit");
        const unsigned byte = static_cast<unsigned>(hi * 16 + lo);
        for (std::size_t j = 0; j < 8; ++j) {
            if (!((byte >> j) & 1u)) continue;
            if (b * 8 + j >= len) throw std::invalid_argument("hex vector: bits set beyond length");
            v.set(b * 8 + j);
        }
    }
    return v;
}

std::string format_decimal(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_instance(std::ostream& out, const Instance& instance) {
    out << "LPN v1 k=" << instance.k << " eta=" << format_decimal(instance.eta) << " seed=" << instance.seed
        << " count=" << instance.examples.size() << '\n';
    for (const auto& e : instance.examples) out << to_hex(e.x) << ' ' << static_cast<int>(e.label) << '\n';
    if (instance.target) out << "TARGET " << to_hex(instance.target->bits) << '\n';
}

Instance read_instance(std::istream& in) {
    Instance inst;
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    const auto head = split_ws(line);
    if (head.size() != 6 || head[0] != "LPN" || head[1] != "v1") {
        throw ParseError(1, "header must be 'LPN v1 k=<k> eta=<eta> seed=<seed> count=<m>'");
    }
    std::size_t count = 0;
    if (!parse_number(header_field(head[2], "k", 1), inst.k)) throw ParseError(1, "bad k");
    if (!parse_number(header_field(head[3], "eta", 1), inst.eta)) throw ParseError(1, "bad eta");
    if (!parse_number(header_field(head[4], "seed", 1), inst.seed)) throw ParseError(1, "bad seed");
    if (!parse_number(header_field(head[5], "count", 1), count)) throw ParseError(1, "bad count");
    try {
        (void)NoiseRate(inst.eta);
    } catch (const std::invalid_argument& e) {
        throw ParseError(1, e.what());
    }

    inst.examples.reserve(count);
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (inst.target) throw ParseError(lineno, "content after TARGET line");
        try {
            if (fields[0] == "TARGET") {
                if (fields.size() != 2) throw ParseError(lineno, "TARGET line needs one vector");
                inst.target = ParityTarget{from_hex(fields[1], inst.k)};
                continue;
            }
            if (fields.size() != 2 || (fields[1] != "0" && fields[1] != "1")) {
                throw ParseError(lineno, "expected '<hex> <0|1>'");
            }
            if (inst.examples.size() == count) throw ParseError(lineno, "more examples than header count");
            const std::uint64_t index = inst.examples.size();
            inst.examples.push_back(
                LabeledExample{from_hex(fields[0], inst.k), static_cast<std::uint8_t>(fields[1] == "1"), index});
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (inst.examples.size() != count) {
        throw ParseError(lineno, "header count " + std::to_string(count) + " but " +
                                     std::to_string(inst.examples.size()) + " examples");
    }
    return inst;
}

Instance generate_instance(std::size_t k, std::size_t count, double eta, std::uint64_t seed, bool with_target) {
    ExampleSource src = ExampleSource::create(k, NoiseRate(eta), UniformDist{}, seed, RandomTarget{});
    Instance inst;
    inst.k = k;
    inst.eta = eta;
    inst.seed = seed;
    inst.examples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) inst.examples.push_back(src.draw());
    if (with_target) inst.target = src.target();
    return inst;
}

ExampleSource instance_source(const Instance& instance) {
    return ExampleSource::replay(instance.k, NoiseRate(instance.eta), instance.examples, instance.target, instance.seed);
}

}  // namespace lpn
