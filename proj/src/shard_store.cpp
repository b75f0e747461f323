#include "tweetfunnel/shard_store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint32_t route_key(std::string_view key, std::uint32_t shard_count) {
  if (shard_count == 0) throw Error(Errc::ZeroShards, "shard_count must be >= 1");
  if (key.empty()) throw Error(Errc::InvalidKey, "empty key");
  return static_cast<std::uint32_t>(fnv1a64(key) % shard_count);
}

namespace {

constexpr std::uint32_t kDefaultShards = 3;

struct IndexEntry {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;  // without the trailing newline
  Timestamp created_at = 0;
};

struct Shard {
  std::mutex mu;
  int fd = -1;
  std::uint64_t size = 0;
  std::unordered_map<std::string, IndexEntry> index;
  std::atomic<std::uint64_t> reads{0};

  ~Shard() {
    if (fd >= 0) ::close(fd);
  }
};

struct Collection {
  std::vector<std::unique_ptr<Shard>> shards;
};

[[noreturn]] void throw_io(const std::string& what, int err) {
  throw Error(err == ENOSPC || err == EDQUOT ? Errc::StorageFull : Errc::IOFailure,
              what + ": " + std::strerror(err));
}

std::string serialize_doc(std::string_view topic, const Document& doc) {
  json line = {
      {"key", doc.key},
      {"topic", topic},
      {"stored_at", doc.stored_at},
      {"payload", to_json(doc.payload)},
  };
  std::string out = line.dump(-1, ' ', false, json::error_handler_t::replace);
  out += '\n';
  return out;
}

Document parse_doc(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::MalformedRecord, "invalid document");
  try {
    Document doc;
    doc.key = j.at("key").get<std::string>();
    doc.topic = j.at("topic").get<std::string>();
    doc.stored_at = j.at("stored_at").get<Timestamp>();
    doc.payload = clean_tweet_from_json(j.at("payload"));
    return doc;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, e.what());
  }
}

std::string read_range(int fd, std::uint64_t offset, std::uint64_t length) {
  std::string buf(length, '\0');
  std::uint64_t done = 0;
  while (done < length) {
    const ssize_t n = ::pread(fd, buf.data() + done, length - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("pread", errno);
    }
    if (n == 0) throw Error(Errc::IOFailure, "unexpected end of shard file");
    done += static_cast<std::uint64_t>(n);
  }
  return buf;
}

}  // namespace

struct ShardStore::Impl {
  fs::path root;
  std::uint32_t shard_count = kDefaultShards;
  StoreOptions options;
  mutable std::shared_mutex topics_mu;
  std::map<std::string, std::unique_ptr<Collection>, std::less<>> collections;
  RecoveryStats recovery;

  fs::path manifest_path() const { return root / "manifest.json"; }

  void write_manifest() const {
    json m = {{"shard_count", shard_count}, {"topics", json::array()}};
    for (const auto& [name, _] : collections) m["topics"].push_back(name);
    const fs::path tmp = root / "manifest.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << m.dump(2) << '\n';
      if (!out) throw Error(Errc::IOFailure, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, manifest_path(), ec);
    if (ec) throw Error(Errc::IOFailure, "rename manifest: " + ec.message());
  }

  std::unique_ptr<Collection> load_collection(const std::string& topic) {
    const fs::path dir = root / topic;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IOFailure, "create " + dir.string() + ": " + ec.message());
    auto coll = std::make_unique<Collection>();
    for (std::uint32_t k = 0; k < shard_count; ++k) {
      auto shard = std::make_unique<Shard>();
      const fs::path file = dir / ("shard-" + std::to_string(k) + ".jsonl");
      shard->fd = ::open(file.c_str(), O_RDWR | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
      if (shard->fd < 0) throw_io("open " + file.string(), errno);
      rebuild_index(*shard, file);
      coll->shards.push_back(std::move(shard));
    }
    return coll;
  }

  void rebuild_index(Shard& shard, const fs::path& file) {
    struct stat st {};
    if (::fstat(shard.fd, &st) < 0) throw_io("stat " + file.string(), errno);
    const auto total = static_cast<std::uint64_t>(st.st_size);
    const std::string data = read_range(shard.fd, 0, total);
    std::uint64_t pos = 0;
    while (pos < total) {
      const auto nl = data.find('\n', pos);
      if (nl == std::string::npos) {
        // Unterminated tail: a put that never completed.
        ++recovery.truncated_tail_records;
        if (::ftruncate(shard.fd, static_cast<off_t>(pos)) < 0) throw_io("truncate " + file.string(), errno);
        break;
      }
      const std::string_view line(data.data() + pos, nl - pos);
      if (!line.empty()) {
        try {
          Document doc = parse_doc(line);
          shard.index[doc.key] = IndexEntry{pos, line.size(), doc.payload.created_at};
          ++recovery.records_loaded;
        } catch (const Error&) {
          ++recovery.corrupt_records;
        }
      }
      pos = nl + 1;
    }
    shard.size = pos;
  }

  Collection& collection(std::string_view topic) const {
    std::shared_lock lock(topics_mu);
    auto it = collections.find(topic);
    if (it == collections.end()) throw Error(Errc::UnknownTopic, std::string(topic));
    return *it->second;
  }
};

ShardStore::ShardStore(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ShardStore::ShardStore(ShardStore&&) noexcept = default;
ShardStore& ShardStore::operator=(ShardStore&&) noexcept = default;
ShardStore::~ShardStore() = default;

ShardStore ShardStore::open(const fs::path& root, std::optional<std::uint32_t> shard_count,
                            StoreOptions options) {
  if (shard_count && *shard_count == 0) throw Error(Errc::ZeroShards, "shard_count must be >= 1");
  auto impl = std::make_unique<Impl>();
  impl->root = root;
  impl->options = options;

  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(Errc::IOFailure, "create " + root.string() + ": " + ec.message());

  if (fs::exists(impl->manifest_path())) {
    std::ifstream in(impl->manifest_path(), std::ios::binary);
    json m = json::parse(in, nullptr, false);
    if (m.is_discarded() || !m.is_object() || !m.contains("shard_count")) {
      throw Error(Errc::IOFailure, "corrupt manifest in " + root.string());
    }
    const auto stored = m.at("shard_count").get<std::uint32_t>();
    if (stored == 0) throw Error(Errc::ZeroShards, "manifest declares zero shards");
    if (shard_count && *shard_count != stored) {
      throw Error(Errc::ShardCountMismatch, "store has " + std::to_string(stored) +
                                                " shards, requested " + std::to_string(*shard_count));
    }
    impl->shard_count = stored;
    for (const auto& t : m.value("topics", json::array())) {
      const auto name = t.get<std::string>();
      if (!is_valid_topic_name(name)) throw Error(Errc::InvalidTopic, "manifest topic '" + name + "'");
      impl->collections.emplace(name, impl->load_collection(name));
    }
  } else {
    impl->shard_count = shard_count.value_or(kDefaultShards);
    impl->write_manifest();
  }
  return ShardStore(std::move(impl));
}

const fs::path& ShardStore::root() const { return impl_->root; }
std::uint32_t ShardStore::shard_count() const { return impl_->shard_count; }
const RecoveryStats& ShardStore::recovery() const { return impl_->recovery; }

std::vector<std::string> ShardStore::topics() const {
  std::shared_lock lock(impl_->topics_mu);
  std::vector<std::string> out;
  for (const auto& [name, _] : impl_->collections) out.push_back(name);
  return out;
}

bool ShardStore::has_topic(std::string_view topic) const {
  std::shared_lock lock(impl_->topics_mu);
  return impl_->collections.find(topic) != impl_->collections.end();
}

void ShardStore::register_topic(const std::string& topic) {
  if (!is_valid_topic_name(topic)) throw Error(Errc::InvalidTopic, "'" + topic + "'");
  std::unique_lock lock(impl_->topics_mu);
  if (impl_->collections.count(topic) != 0) return;
  impl_->collections.emplace(topic, impl_->load_collection(topic));
  impl_->write_manifest();
}

void ShardStore::put_doc(std::string_view topic, const Document& doc) {
  if (doc.key.empty()) throw Error(Errc::InvalidKey, "empty document key");
  if (!doc.topic.empty() && doc.topic != topic) {
    throw Error(Errc::InvalidArgument, "document topic '" + doc.topic + "' != '" + std::string(topic) + "'");
  }
  Collection& coll = impl_->collection(topic);
  Shard& shard = *coll.shards[route_key(doc.key, impl_->shard_count)];
  const std::string line = serialize_doc(topic, doc);

  std::lock_guard lock(shard.mu);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(shard.fd, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      // Drop the partial record so the segment stays line-aligned.
      [[maybe_unused]] const int rc = ::ftruncate(shard.fd, static_cast<off_t>(shard.size));
      throw_io("append", err);
    }
    done += static_cast<std::size_t>(n);
  }
  if (impl_->options.fsync_each_put && ::fsync(shard.fd) < 0) throw_io("fsync", errno);
  shard.index[doc.key] = IndexEntry{shard.size, line.size() - 1, doc.payload.created_at};
  shard.size += line.size();
}

std::optional<Document> ShardStore::get_doc(std::string_view topic, std::string_view key) const {
  Collection& coll = impl_->collection(topic);
  if (key.empty()) return std::nullopt;
  Shard& shard = *coll.shards[route_key(key, impl_->shard_count)];
  IndexEntry entry;
  {
    std::lock_guard lock(shard.mu);
    ++shard.reads;
    auto it = shard.index.find(std::string(key));
    if (it == shard.index.end()) return std::nullopt;
    entry = it->second;
  }
  return parse_doc(read_range(shard.fd, entry.offset, entry.length));
}

std::vector<Document> ShardStore::scan_collection(std::string_view topic,
                                                  std::optional<TimeRange> range) const {
  Collection& coll = impl_->collection(topic);
  if (range && range->begin >= range->end) {
    throw Error(Errc::InvalidRange, "scan range must satisfy t0 < t1");
  }
  std::vector<Document> out;
  for (const auto& shard : coll.shards) {
    std::vector<IndexEntry> entries;
    std::uint64_t snapshot_size = 0;
    {
      std::lock_guard lock(shard->mu);
      snapshot_size = shard->size;
      for (const auto& [key, entry] : shard->index) {
        if (!range || range->contains(entry.created_at)) entries.push_back(entry);
      }
      shard->reads += entries.size();
    }
    if (entries.empty()) continue;
    const std::string data = read_range(shard->fd, 0, snapshot_size);
    for (const IndexEntry& e : entries) {
      out.push_back(parse_doc(std::string_view(data).substr(e.offset, e.length)));
    }
  }
  std::sort(out.begin(), out.end(), [](const Document& a, const Document& b) {
    if (a.payload.created_at != b.payload.created_at) return a.payload.created_at < b.payload.created_at;
    return a.key < b.key;
  });
  return out;
}

std::size_t ShardStore::document_count(std::string_view topic) const {
  Collection& coll = impl_->collection(topic);
  std::size_t n = 0;
  for (const auto& shard : coll.shards) {
    std::lock_guard lock(shard->mu);
    n += shard->index.size();
  }
  return n;
}

std::vector<std::uint64_t> ShardStore::shard_reads(std::string_view topic) const {
  Collection& coll = impl_->collection(topic);
  std::vector<std::uint64_t> out;
  for (const auto& shard : coll.shards) out.push_back(shard->reads.load());
  return out;
}

}  // namespace tweetfunnel
