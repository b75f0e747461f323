#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <memory>
#include <optional>
#include <string>

#include "tweetfunnel/channel.hpp"
#include "tweetfunnel/tweet.hpp"

namespace tweetfunnel {

/// A sequence of JSON-lines records. next_record() returns nullopt at the end
/// of the stream and throws Error(SourceUnreadable) if the underlying source
/// fails.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<std::string> next_record() = 0;
};

class StreamRecordSource : public RecordSource {
 public:
  explicit StreamRecordSource(std::istream& in) : in_(in) {}
  std::optional<std::string> next_record() override;

 private:
  std::istream& in_;
};

class FileRecordSource : public RecordSource {
 public:
  /// Throws Error(SourceUnreadable) if the file cannot be opened.
  explicit FileRecordSource(const std::filesystem::path& path);
  std::optional<std::string> next_record() override;

 private:
  std::ifstream file_;
  StreamRecordSource lines_;
};

/// Reads newline-framed records from a file descriptor (socket or pipe).
/// Takes ownership of the descriptor.
class FdRecordSource : public RecordSource {
 public:
  explicit FdRecordSource(int fd);
  ~FdRecordSource() override;
  FdRecordSource(const FdRecordSource&) = delete;
  FdRecordSource& operator=(const FdRecordSource&) = delete;

  std::optional<std::string> next_record() override;

 private:
  int fd_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
};

/// Opens "tcp://HOST:PORT" as a loopback stream, anything else as a file.
std::unique_ptr<RecordSource> open_source(const std::string& input);

struct ReplayStats {
  std::uint64_t records = 0;  // non-blank lines read
  std::uint64_t emitted = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t reordered = 0;
};

/// Parses every record of `source` and hands the tweets to `emit` in input
/// order. With speed > 0 emissions are paced so that consecutive tweets are
/// (created_at delta) / speed seconds apart; speed == 0 emits as fast as
/// possible. A tweet older than the newest one seen is emitted immediately
/// and counted in `reordered`. Malformed records are skipped and counted.
///
/// Errors raised by the source propagate after the tweets already emitted.
ReplayStats replay_stream(RecordSource& source, double speed,
                          const std::function<void(RawTweet&&)>& emit);

/// Runs replay_stream on a worker thread, pushing into `out` and closing it
/// when the source is exhausted or fails. The future carries the stats or
/// the source error.
std::future<ReplayStats> spawn_replay(RecordSource& source, double speed, Channel<RawTweet>& out);

}  // namespace tweetfunnel
