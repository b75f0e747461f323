#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingField: return "MissingField";
    case Errc::MalformedTimestamp: return "MalformedTimestamp";
    case Errc::InvalidField: return "InvalidField";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::EmptyKeywordList: return "EmptyKeywordList";
    case Errc::InvalidTopic: return "InvalidTopic";
    case Errc::SourceUnreadable: return "SourceUnreadable";
    case Errc::ZeroShards: return "ZeroShards";
    case Errc::ShardCountMismatch: return "ShardCountMismatch";
    case Errc::UnknownTopic: return "UnknownTopic";
    case Errc::InvalidKey: return "InvalidKey";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::StorageFull: return "StorageFull";
    case Errc::IOFailure: return "IOFailure";
    case Errc::DuplicateTweetId: return "DuplicateTweetId";
    case Errc::InvalidWidth: return "InvalidWidth";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::UnknownNodeReference: return "UnknownNodeReference";
    case Errc::MissingKindAttribute: return "MissingKindAttribute";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace tweetfunnel
