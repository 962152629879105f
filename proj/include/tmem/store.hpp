#pragma once

#include "tmem/unit.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmem {

struct CommitRequest {
    std::string source;
    std::string target;
    std::string source_lang = "en";
    std::string target_lang = "hi";
    Scope scope = Scope::local;
    std::string author;
    Origin origin = Origin::manual;
};

struct CommitResult {
    TranslationUnit unit;
    bool created = false;
};

/// Append-only translation-unit log. One JSON object per line:
///
///     {"op":"add","id":...,"src":...,"tgt":...,"slang":...,"tlang":...,
///      "scope":...,"author":...,"ts":...,"origin":...}
///     {"op":"del","id":...,"ts":...}
///
/// Every record is flushed and fsync'ed before the call returns; a torn final
/// line (no newline) is ignored on replay and trimmed the next time the file
/// is opened. Appends take an exclusive flock on the file.
class TmStore {
public:
    using Clock = std::function<std::int64_t()>;

    /// Opens or creates the log at `path` and replays it. Throws Error(io) when
    /// the file cannot be opened and Error(format) on a corrupt record.
    static TmStore open(const std::string& path);

    /// Replays log contents without touching the filesystem.
    static std::vector<TranslationUnit> replay(std::string_view contents);

    /// Idempotent: an identical pair returns the existing unit with
    /// created=false. Throws Error(validation) on bad input and Error(io) when
    /// the append fails, in which case the store is unchanged.
    CommitResult commit(const CommitRequest& request);

    /// Commits many pairs with a single append and sync. Every request is
    /// validated before anything is written; one invalid request rejects the
    /// whole batch with Error(validation).
    std::vector<CommitResult> commit_all(const std::vector<CommitRequest>& requests);

    /// Appends a tombstone. Throws Error(not_found) if the id is not live.
    void remove(const UnitId& id);
    void remove_all(const std::vector<UnitId>& ids);

    const std::string& path() const { return path_; }
    /// Live units in append order.
    std::vector<TranslationUnit> units() const;
    const TranslationUnit* find(const UnitId& id) const;
    std::size_t size() const { return live_.size(); }

    void set_clock(Clock clock) { clock_ = std::move(clock); }

private:
    explicit TmStore(std::string path);

    void append_line(const std::string& line);
    std::int64_t next_timestamp();

    std::string path_;
    std::vector<TranslationUnit> log_;
    std::unordered_map<UnitId, std::size_t> live_;
    std::int64_t last_ts_ = 0;
    Clock clock_;
};

/// Union by id of both stores' live units. Local units come first in their
/// append order, then global-only units; a unit present in both keeps the
/// local metadata.
std::vector<TranslationUnit> merged_view(const TmStore& local, const TmStore* global);
std::vector<TranslationUnit> merged_view(const std::vector<TranslationUnit>& local,
                                         const std::vector<TranslationUnit>& global);

} // namespace tmem
