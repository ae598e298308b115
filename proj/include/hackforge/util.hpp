#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hackforge {

/// Raw bytes. Test inputs and program outputs are stored verbatim.
using Bytes = std::string;

std::string sha256_hex(std::string_view data);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

/// Converts CRLF and lone CR to LF. Applied only when comparing outputs.
std::string normalize_newlines(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

/// Splits a command template into argv without a shell. Double quotes group words.
std::vector<std::string> split_command(std::string_view cmd);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

std::string zero_pad(std::size_t value, int width);

std::string utc_timestamp();

using u128 = unsigned __int128;

/// Exact value of "998244353", "2^64", "1e9+7", "10^9 + 9". nullopt when the
/// text does not parse or the value leaves [0, 2^64].
std::optional<u128> parse_uint_expression(std::string_view text);
std::string to_decimal(u128 v);

/// Runs fn(i) for i in [0, count) on at most `workers` threads. Results are
/// written by index, so ordering of side effects inside fn is the caller's
/// concern.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hackforge
