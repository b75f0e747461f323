#include "tweetfunnel/ingest.hpp"

#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "tweetfunnel/error.hpp"
#include "tweetfunnel/loopback.hpp"

namespace tweetfunnel {

std::optional<std::string> StreamRecordSource::next_record() {
  std::string line;
  if (std::getline(in_, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  if (in_.bad()) throw Error(Errc::SourceUnreadable, "read failure on input stream");
  return std::nullopt;
}

FileRecordSource::FileRecordSource(const std::filesystem::path& path)
    : file_(path, std::ios::binary), lines_(file_) {
  if (!file_) throw Error(Errc::SourceUnreadable, "cannot open " + path.string());
}

std::optional<std::string> FileRecordSource::next_record() { return lines_.next_record(); }

FdRecordSource::FdRecordSource(int fd) : fd_(fd) {}

FdRecordSource::~FdRecordSource() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<std::string> FdRecordSource::next_record() {
  while (true) {
    const std::size_t nl = buffer_.find('\n', pos_);
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(pos_, nl - pos_);
      pos_ = nl + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_) {
      if (pos_ >= buffer_.size()) return std::nullopt;
      std::string line = buffer_.substr(pos_);
      pos_ = buffer_.size();
      return line;
    }
    buffer_.erase(0, pos_);
    pos_ = 0;
    char chunk[64 * 1024];
    const ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::SourceUnreadable, std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      eof_ = true;
    } else {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }
}

std::unique_ptr<RecordSource> open_source(const std::string& input) {
  constexpr std::string_view kScheme = "tcp://";
  if (input.rfind(kScheme, 0) == 0) {
    const std::string rest = input.substr(kScheme.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw Error(Errc::InvalidArgument, "expected tcp://HOST:PORT, got " + input);
    }
    int port = 0;
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      port = -1;
    }
    if (port <= 0 || port > 65535) throw Error(Errc::InvalidArgument, "bad port in " + input);
    return std::make_unique<FdRecordSource>(
        connect_loopback(rest.substr(0, colon), static_cast<std::uint16_t>(port)));
  }
  return std::make_unique<FileRecordSource>(input);
}

ReplayStats replay_stream(RecordSource& source, double speed,
                          const std::function<void(RawTweet&&)>& emit) {
  if (!(speed >= 0.0)) throw Error(Errc::InvalidArgument, "replay speed must be >= 0");
  using Clock = std::chrono::steady_clock;

  ReplayStats stats;
  std::optional<Timestamp> first_ts;
  Timestamp newest = 0;
  Clock::time_point start{};

  while (auto record = source.next_record()) {
    if (record->find_first_not_of(" \t\r") == std::string::npos) continue;
    ++stats.records;
    RawTweet tweet;
    try {
      tweet = parse_tweet_line(*record);
    } catch (const Error&) {
      ++stats.parse_errors;
      continue;
    }

    if (!first_ts) {
      first_ts = tweet.created_at;
      newest = tweet.created_at;
      start = Clock::now();
    } else if (tweet.created_at < newest) {
      ++stats.reordered;
    } else {
      newest = tweet.created_at;
      if (speed > 0.0) {
        const double offset = static_cast<double>(newest - *first_ts) / speed;
        std::this_thread::sleep_until(
            start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(offset)));
      }
    }
    emit(std::move(tweet));
    ++stats.emitted;
  }
  return stats;
}

std::future<ReplayStats> spawn_replay(RecordSource& source, double speed, Channel<RawTweet>& out) {
  return std::async(std::launch::async, [&source, speed, &out] {
    struct Closer {
      Channel<RawTweet>& ch;
      ~Closer() { ch.close(); }
    } closer{out};
    return replay_stream(source, speed, [&out](RawTweet&& t) { out.push(std::move(t)); });
  });
}

}  // namespace tweetfunnel
