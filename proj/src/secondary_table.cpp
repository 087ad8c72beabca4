#include "principar/secondary_table.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>

namespace principar {

namespace {

constexpr char kMagic[4] = {'P', 'L', 'E', 'X'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 16;
constexpr std::size_t kDirEntrySize = 12;

void put_u16(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
std::uint64_t get_le(const char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
    return v;
}

std::uint32_t bucket_count_for(std::size_t entries) {
    std::uint64_t want = std::max<std::uint64_t>(1, 2 * static_cast<std::uint64_t>(entries));
    std::uint64_t b = 1;
    while (b < want) b <<= 1;
    if (b > 0xffffffffull) throw LexiconError("too many entries for one table");
    return static_cast<std::uint32_t>(b);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint32_t crc32_of(std::string_view a, std::string_view b) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(a.data()), static_cast<uInt>(a.size()));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(b.data()), static_cast<uInt>(b.size()));
    return static_cast<std::uint32_t>(crc);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

TableStats write_secondary_table(const std::string& path,
                                 const std::vector<std::pair<std::string, std::string>>& records) {
    // Later keys win.
    std::map<std::string, std::size_t> last;
    for (std::size_t i = 0; i < records.size(); ++i) last[to_lower(records[i].first)] = i;

    TableStats stats;
    stats.entries = static_cast<std::uint32_t>(last.size());
    stats.buckets = bucket_count_for(last.size());
    const std::uint64_t mask = stats.buckets - 1;

    std::vector<std::vector<std::pair<std::string, const std::string*>>> buckets(stats.buckets);
    for (const auto& [key, idx] : last) {
        if (key.size() > 0xffff) throw LexiconError("key too long: " + key.substr(0, 40));
        buckets[fnv1a64(key) & mask].emplace_back(key, &records[idx].second);
    }

    std::string header;
    header.append(kMagic, 4);
    put_u32(header, kVersion);
    put_u32(header, stats.buckets);
    put_u32(header, stats.entries);

    std::string dir;
    dir.reserve(stats.buckets * kDirEntrySize);
    std::string body;
    std::uint64_t offset = kHeaderSize + static_cast<std::uint64_t>(stats.buckets) * kDirEntrySize;
    std::uint64_t occupied_total = 0;
    for (const auto& bucket : buckets) {
        put_u64(dir, offset + body.size());
        put_u32(dir, static_cast<std::uint32_t>(bucket.size()));
        if (!bucket.empty()) {
            ++stats.occupied_buckets;
            occupied_total += bucket.size();
            stats.max_bucket = std::max<std::uint32_t>(stats.max_bucket, static_cast<std::uint32_t>(bucket.size()));
        }
        for (const auto& [key, value] : bucket) {
            put_u16(body, static_cast<std::uint16_t>(key.size()));
            body += key;
            put_u32(body, static_cast<std::uint32_t>(value->size()));
            body += *value;
            put_u32(body, crc32_of(key, *value));
        }
    }
    if (stats.occupied_buckets)
        stats.mean_occupied = static_cast<double>(occupied_total) / stats.occupied_buckets;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LexiconError("cannot write table: " + path);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(dir.data(), static_cast<std::streamsize>(dir.size()));
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw LexiconError("write failed: " + path);
    return stats;
}

SecondaryTable::SecondaryTable(const std::string& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw LexiconError("cannot open table " + path + ": " + std::strerror(errno));
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
        ::close(fd_);
        throw LexiconError("cannot stat table " + path);
    }
    file_size_ = static_cast<std::uint64_t>(st.st_size);
    try {
        if (file_size_ < kHeaderSize) throw LexiconError("table too short: " + path);
        std::string header = read_region(0, kHeaderSize);
        if (std::memcmp(header.data(), kMagic, 4) != 0) throw LexiconError("bad magic in " + path);
        if (get_le(header.data() + 4, 4) != kVersion) throw LexiconError("unsupported table version in " + path);
        bucket_count_ = static_cast<std::uint32_t>(get_le(header.data() + 8, 4));
        entry_count_ = static_cast<std::uint32_t>(get_le(header.data() + 12, 4));
        if (bucket_count_ == 0 || (bucket_count_ & (bucket_count_ - 1)))
            throw LexiconError("bucket count is not a power of two in " + path);
        std::uint64_t dir_bytes = static_cast<std::uint64_t>(bucket_count_) * kDirEntrySize;
        if (kHeaderSize + dir_bytes > file_size_) throw LexiconError("truncated directory in " + path);
        std::string dir = read_region(kHeaderSize, dir_bytes);
        buckets_.resize(bucket_count_);
        for (std::uint32_t b = 0; b < bucket_count_; ++b) {
            const char* p = dir.data() + b * kDirEntrySize;
            buckets_[b] = {get_le(p, 8), static_cast<std::uint32_t>(get_le(p + 8, 4))};
        }
    } catch (...) {
        ::close(fd_);
        throw;
    }
}

SecondaryTable::~SecondaryTable() {
    if (fd_ >= 0) ::close(fd_);
}

std::string SecondaryTable::read_region(std::uint64_t offset, std::uint64_t length) const {
    std::string buf(length, '\0');
    std::uint64_t done = 0;
    while (done < length) {
        ssize_t n = ::pread(fd_, buf.data() + done, length - done, static_cast<off_t>(offset + done));
        if (n < 0) {
            if (errno == EINTR) continue;
            throw LexiconError("read failed on " + path_ + ": " + std::strerror(errno));
        }
        if (n == 0) throw LexiconError("unexpected end of table " + path_);
        done += static_cast<std::uint64_t>(n);
    }
    return buf;
}

std::uint64_t SecondaryTable::region_end(std::uint32_t bucket) const {
    return bucket + 1 < bucket_count_ ? buckets_[bucket + 1].offset : file_size_;
}

namespace {

struct Record {
    std::string_view key;
    std::string_view value;
};

// Walks the records of one bucket region, verifying checksums.
template <class F>
void for_each_record(const std::string& region, std::uint32_t count, const std::string& path, F&& f) {
    std::size_t p = 0;
    auto need = [&](std::size_t n) {
        if (p + n > region.size()) throw LexiconError("corrupt record in " + path);
    };
    for (std::uint32_t i = 0; i < count; ++i) {
        need(2);
        auto klen = static_cast<std::size_t>(get_le(region.data() + p, 2));
        p += 2;
        need(klen);
        std::string_view key(region.data() + p, klen);
        p += klen;
        need(4);
        auto vlen = static_cast<std::size_t>(get_le(region.data() + p, 4));
        p += 4;
        need(vlen);
        std::string_view value(region.data() + p, vlen);
        p += vlen;
        need(4);
        auto crc = static_cast<std::uint32_t>(get_le(region.data() + p, 4));
        p += 4;
        if (crc != crc32_of(key, value))
            throw LexiconError("checksum mismatch for key '" + std::string(key) + "' in " + path);
        if (f(Record{key, value})) return;
    }
}

}  // namespace

std::optional<std::string> SecondaryTable::find(std::string_view key) const {
    std::string k = to_lower(key);
    auto b = static_cast<std::uint32_t>(fnv1a64(k) & (bucket_count_ - 1));
    const Bucket& bucket = buckets_[b];
    if (bucket.count == 0) return std::nullopt;
    std::uint64_t end = region_end(b);
    if (end < bucket.offset || end > file_size_) throw LexiconError("corrupt directory in " + path_);
    std::string region = read_region(bucket.offset, end - bucket.offset);
    std::optional<std::string> out;
    for_each_record(region, bucket.count, path_, [&](const Record& r) {
        if (r.key == k) {
            out = std::string(r.value);
            return true;
        }
        return false;
    });
    return out;
}

std::vector<std::pair<std::string, std::string>> SecondaryTable::scan() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(entry_count_);
    for (std::uint32_t b = 0; b < bucket_count_; ++b) {
        if (!buckets_[b].count) continue;
        std::string region = read_region(buckets_[b].offset, region_end(b) - buckets_[b].offset);
        for_each_record(region, buckets_[b].count, path_, [&](const Record& r) {
            out.emplace_back(std::string(r.key), std::string(r.value));
            return false;
        });
    }
    return out;
}

}  // namespace principar
