#include "lpn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "lpn/io.hpp"

namespace lpn {

namespace {

std::string csv_cell(const nlohmann::json& cell) {
    if (cell.is_null()) return {};
    if (cell.is_number_float()) return format_decimal(cell.get<double>());
    if (!cell.is_string()) return cell.dump();
    const std::string s = cell.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) obj[table.columns[i]] = row[i];
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

void emit(const Table& table, const std::string& path, Format format) {
    auto write = [&](std::ostream& out) { format == Format::Json ? write_json(out, table) : write_csv(out, table); };
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    write(out);
    if (!out) throw IoError("failed writing output file: " + path);
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
    auto parse = [&](std::string_view tok) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
            throw UsageError("bad seed list '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<std::uint64_t> seeds;
    if (text.find(',') == std::string_view::npos) {
        const std::uint64_t n = parse(text);
        if (n == 0) throw UsageError("--seeds N needs N >= 1");
        for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        seeds.push_back(parse(text.substr(start, end - start)));
        start = end + 1;
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        throw UsageError("seeds must be distinct");
    }
    return seeds;
}

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LPN_THREADS")) {
        std::size_t cap = 0;
        const std::string_view s(env);
        if (std::from_chars(s.data(), s.data() + s.size(), cap).ec == std::errc{} && cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace lpn
