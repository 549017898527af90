#include "kv.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace aquannr::tools {

KvMap read_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    KvMap kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void write_kv_file(const std::filesystem::path& path, const KvMap& kv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
    if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

std::vector<std::string> split_csv(const std::string& spec) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : spec) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& spec) {
    std::vector<std::uint64_t> out;
    for (const auto& part : split_csv(spec)) {
        const auto c1 = part.find(':');
        if (c1 == std::string::npos) {
            out.push_back(std::stoull(part));
            continue;
        }
        const auto c2 = part.find(':', c1 + 1);
        const std::uint64_t from = std::stoull(part.substr(0, c1));
        const std::uint64_t to = std::stoull(
            c2 == std::string::npos ? part.substr(c1 + 1) : part.substr(c1 + 1, c2 - c1 - 1));
        const std::uint64_t step =
            c2 == std::string::npos ? 1 : std::stoull(part.substr(c2 + 1));
        if (step == 0 || to < from) {
            throw std::invalid_argument("bad range '" + part + "'");
        }
        for (std::uint64_t v = from; v <= to; v += step) out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + spec + "'");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
    std::vector<std::size_t> out;
    for (const auto v : parse_u64_list(spec)) out.push_back(static_cast<std::size_t>(v));
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (const auto v : parse_u64_list(spec)) out.push_back(static_cast<int>(v));
    return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_int(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

unsigned resolve_thread_count(std::size_t cells) {
    unsigned want = std::thread::hardware_concurrency();
    if (want == 0) want = 1;
    if (const char* env = std::getenv("AQUANNR_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        want = parsed <= 0 ? 1 : static_cast<unsigned>(parsed);
    }
    if (want > cells) want = static_cast<unsigned>(cells);
    return want == 0 ? 1 : want;
}

void parallel_cells(std::size_t cells, const std::function<void(std::size_t)>& fn) {
    if (cells == 0) return;
    const unsigned workers = resolve_thread_count(cells);
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace aquannr::tools
