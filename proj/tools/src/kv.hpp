#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace aquannr::tools {

using KvMap = std::map<std::string, std::string>;

/// Flat key=value file: one pair per line, '#' comments and blank lines
/// allowed. Keys are returned sorted (std::map order).
KvMap read_kv_file(const std::filesystem::path& path);
void write_kv_file(const std::filesystem::path& path, const KvMap& kv);

/// "5", "1,2,3" or "a:b[:step]" inclusive ranges.
std::vector<std::uint64_t> parse_u64_list(const std::string& spec);
std::vector<std::size_t> parse_size_list(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);
std::vector<std::string> split_csv(const std::string& spec);

std::string join_u64(const std::vector<std::uint64_t>& v);
std::string join_int(const std::vector<int>& v);
std::string join_strings(const std::vector<std::string>& v);

/// Worker count for independent grid cells: AQUANNR_THREADS caps it,
/// 0 forces serial execution, unset uses the hardware concurrency.
unsigned resolve_thread_count(std::size_t cells);

/// Runs fn(i) for i in [0, cells) across resolve_thread_count() workers.
/// Exceptions are captured and rethrown after all workers join.
void parallel_cells(std::size_t cells, const std::function<void(std::size_t)>& fn);

}  // namespace aquannr::tools
