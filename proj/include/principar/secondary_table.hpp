#pragma once

// Read-optimized on-disk hash table holding the bulk of the lexicon.
//
// Layout (little-endian):
//   header    "PLEX" | version u32 = 1 | bucket_count u32 | entry_count u32
//   directory bucket_count x (offset u64, record_count u32)
//   records   per bucket, contiguous:
//             key_len u16 | key | val_len u32 | value | crc32(key + value) u32
//
// Keys are lowercased and hashed with 64-bit FNV-1a modulo bucket_count, which
// is the smallest power of two >= 2 * entry_count.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace principar {

class LexiconError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view s);
std::uint32_t crc32_of(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

struct TableStats {
    std::uint32_t entries = 0;
    std::uint32_t buckets = 0;
    std::uint32_t occupied_buckets = 0;
    std::uint32_t max_bucket = 0;
    double mean_occupied = 0.0;  // records per non-empty bucket
};

/// Writes a table from (key, value) pairs; later duplicates of a key win.
TableStats write_secondary_table(const std::string& path,
                                 const std::vector<std::pair<std::string, std::string>>& records);

class SecondaryTable {
public:
    /// Opens a table. Throws LexiconError on I/O failure or a bad header.
    explicit SecondaryTable(const std::string& path);
    ~SecondaryTable();
    SecondaryTable(const SecondaryTable&) = delete;
    SecondaryTable& operator=(const SecondaryTable&) = delete;

    /// Value stored under `key`, or nullopt. Safe for concurrent callers.
    /// Throws LexiconError on a checksum mismatch or read failure.
    std::optional<std::string> find(std::string_view key) const;

    std::uint32_t entry_count() const { return entry_count_; }
    std::uint32_t bucket_count() const { return bucket_count_; }
    const std::string& path() const { return path_; }

    /// Every (key, value) pair, in bucket order.
    std::vector<std::pair<std::string, std::string>> scan() const;

private:
    struct Bucket {
        std::uint64_t offset;
        std::uint32_t count;
    };
    std::string read_region(std::uint64_t offset, std::uint64_t length) const;
    std::uint64_t region_end(std::uint32_t bucket) const;

    std::string path_;
    int fd_ = -1;
    std::uint32_t bucket_count_ = 0;
    std::uint32_t entry_count_ = 0;
    std::uint64_t file_size_ = 0;
    std::vector<Bucket> buckets_;
};

}  // namespace principar
