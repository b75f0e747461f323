#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tweetfunnel {

enum class Errc {
  MissingField,
  MalformedTimestamp,
  InvalidField,
  MalformedRecord,
  EmptyKeywordList,
  InvalidTopic,
  SourceUnreadable,
  ZeroShards,
  ShardCountMismatch,
  UnknownTopic,
  InvalidKey,
  InvalidRange,
  StorageFull,
  IOFailure,
  DuplicateTweetId,
  InvalidWidth,
  MalformedXml,
  UnknownNodeReference,
  MissingKindAttribute,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. `code()` identifies the contract
/// that was violated; `what()` carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tweetfunnel
