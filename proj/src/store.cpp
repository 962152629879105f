#include "tmem/store.hpp"

#include "tmem/error.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tmem {

namespace {

using json = nlohmann::json;

std::int64_t system_now()
{
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string errno_text()
{
    return std::strerror(errno);
}

class FileDescriptor {
public:
    explicit FileDescriptor(int fd) : fd_(fd) {}
    FileDescriptor(const FileDescriptor&) = delete;
    FileDescriptor& operator=(const FileDescriptor&) = delete;
    ~FileDescriptor()
    {
        if (fd_ >= 0) {
            ::close(fd_);
        }
    }
    int get() const { return fd_; }

private:
    int fd_;
};

std::string add_record(const TranslationUnit& unit)
{
    json j = {
        {"op", "add"},
        {"id", unit.id},
        {"src", unit.source.raw},
        {"tgt", unit.target.raw},
        {"slang", unit.source.lang},
        {"tlang", unit.target.lang},
        {"scope", std::string(to_string(unit.meta.scope))},
        {"author", unit.meta.author},
        {"ts", unit.meta.created_at},
        {"origin", std::string(to_string(unit.meta.origin))},
    };
    return j.dump() + "\n";
}

std::string del_record(const UnitId& id, std::int64_t ts)
{
    json j = {{"op", "del"}, {"id", id}, {"ts", ts}};
    return j.dump() + "\n";
}

struct Replayer {
    std::vector<TranslationUnit> log;
    std::unordered_map<UnitId, std::size_t> live;
    std::int64_t last_ts = 0;

    void apply(const std::string& line, std::size_t line_no)
    {
        auto corrupt = [&](const std::string& why) {
            return Error(ErrorCode::format, "store record " + std::to_string(line_no) + ": " + why);
        };
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            throw corrupt("not valid JSON");
        }
        if (!j.is_object() || !j.contains("op") || !j.contains("id") || !j.contains("ts")) {
            throw corrupt("missing op/id/ts");
        }
        try {
            const auto op = j.at("op").get<std::string>();
            const auto id = j.at("id").get<std::string>();
            last_ts = std::max(last_ts, j.at("ts").get<std::int64_t>());
            if (op == "del") {
                live.erase(id);
                return;
            }
            if (op != "add") {
                throw corrupt("unknown op '" + op + "'");
            }
            UnitMeta meta;
            const auto scope = parse_scope(j.at("scope").get<std::string>());
            const auto origin = parse_origin(j.at("origin").get<std::string>());
            if (!scope || !origin) {
                throw corrupt("bad scope or origin");
            }
            meta.scope = *scope;
            meta.origin = *origin;
            meta.author = j.at("author").get<std::string>();
            meta.created_at = j.at("ts").get<std::int64_t>();
            auto unit = make_unit(j.at("src").get<std::string>(), j.at("tgt").get<std::string>(),
                                  j.at("slang").get<std::string>(), j.at("tlang").get<std::string>(), meta);
            if (unit.id != id) {
                throw corrupt("id does not match content");
            }
            if (live.count(id) != 0) {
                return;
            }
            live.emplace(id, log.size());
            log.push_back(std::move(unit));
        } catch (const json::exception& e) {
            throw corrupt(e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::format) {
                throw;
            }
            throw corrupt(e.what());
        }
    }

    // Returns the byte length of the complete-record prefix.
    std::size_t run(std::string_view contents)
    {
        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < contents.size()) {
            const auto nl = contents.find('\n', pos);
            if (nl == std::string_view::npos) {
                break; // torn tail
            }
            ++line_no;
            const std::string line(contents.substr(pos, nl - pos));
            if (!line.empty()) {
                apply(line, line_no);
            }
            pos = nl + 1;
        }
        return pos;
    }
};

} // namespace

TmStore::TmStore(std::string path) : path_(std::move(path)), clock_(system_now) {}

TmStore TmStore::open(const std::string& path)
{
    TmStore store(path);
    FileDescriptor fd(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644));
    if (fd.get() < 0) {
        throw Error(ErrorCode::io, "cannot open store " + path + ": " + errno_text());
    }
    if (::flock(fd.get(), LOCK_EX) != 0) {
        throw Error(ErrorCode::io, "cannot lock store " + path + ": " + errno_text());
    }

    std::string contents;
    char buf[1 << 16];
    for (;;) {
        const ssize_t n = ::read(fd.get(), buf, sizeof buf);
        if (n < 0) {
            throw Error(ErrorCode::io, "cannot read store " + path + ": " + errno_text());
        }
        if (n == 0) {
            break;
        }
        contents.append(buf, static_cast<std::size_t>(n));
    }

    Replayer r;
    const std::size_t complete = r.run(contents);
    if (complete < contents.size()) {
        if (::ftruncate(fd.get(), static_cast<off_t>(complete)) != 0) {
            throw Error(ErrorCode::io, "cannot trim torn record in " + path + ": " + errno_text());
        }
    }
    store.log_ = std::move(r.log);
    store.live_ = std::move(r.live);
    store.last_ts_ = r.last_ts;
    return store;
}

std::vector<TranslationUnit> TmStore::replay(std::string_view contents)
{
    Replayer r;
    r.run(contents);
    std::vector<TranslationUnit> out;
    for (std::size_t i = 0; i < r.log.size(); ++i) {
        auto it = r.live.find(r.log[i].id);
        if (it != r.live.end() && it->second == i) {
            out.push_back(r.log[i]);
        }
    }
    return out;
}

void TmStore::append_line(const std::string& line)
{
    FileDescriptor fd(::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644));
    if (fd.get() < 0) {
        throw Error(ErrorCode::io, "cannot open store " + path_ + ": " + errno_text());
    }
    if (::flock(fd.get(), LOCK_EX) != 0) {
        throw Error(ErrorCode::io, "cannot lock store " + path_ + ": " + errno_text());
    }
    struct stat st {};
    if (::fstat(fd.get(), &st) != 0) {
        throw Error(ErrorCode::io, "cannot stat store " + path_ + ": " + errno_text());
    }

    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(fd.get(), line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            const std::string why = errno_text();
            [[maybe_unused]] const int rc = ::ftruncate(fd.get(), st.st_size);
            throw Error(ErrorCode::io, "cannot append to store " + path_ + ": " + why);
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd.get()) != 0) {
        const std::string why = errno_text();
        [[maybe_unused]] const int rc = ::ftruncate(fd.get(), st.st_size);
        throw Error(ErrorCode::io, "cannot sync store " + path_ + ": " + why);
    }
}

std::int64_t TmStore::next_timestamp()
{
    return std::max(last_ts_, clock_());
}

CommitResult TmStore::commit(const CommitRequest& request)
{
    return commit_all({request}).front();
}

std::vector<CommitResult> TmStore::commit_all(const std::vector<CommitRequest>& requests)
{
    std::vector<TranslationUnit> units;
    units.reserve(requests.size());
    for (const auto& r : requests) {
        UnitMeta meta;
        meta.scope = r.scope;
        meta.author = r.author;
        meta.origin = r.origin;
        units.push_back(make_unit(r.source, r.target, r.source_lang, r.target_lang, meta));
    }

    const auto ts = next_timestamp();
    std::vector<CommitResult> results;
    std::unordered_map<UnitId, std::size_t> fresh;
    std::string records;
    for (auto& unit : units) {
        if (const auto* existing = find(unit.id)) {
            results.push_back({*existing, false});
            continue;
        }
        if (auto it = fresh.find(unit.id); it != fresh.end()) {
            results.push_back({results[it->second].unit, false});
            continue;
        }
        unit.meta.created_at = ts;
        records += add_record(unit);
        fresh.emplace(unit.id, results.size());
        results.push_back({std::move(unit), true});
    }
    if (records.empty()) {
        return results;
    }

    append_line(records);
    last_ts_ = ts;
    for (const auto& r : results) {
        if (r.created) {
            live_.emplace(r.unit.id, log_.size());
            log_.push_back(r.unit);
        }
    }
    return results;
}

void TmStore::remove(const UnitId& id)
{
    remove_all({id});
}

void TmStore::remove_all(const std::vector<UnitId>& ids)
{
    std::unordered_set<UnitId> pending;
    for (const auto& id : ids) {
        if (live_.count(id) == 0 || !pending.insert(id).second) {
            throw Error(ErrorCode::not_found, "unit " + id + " is not in the store");
        }
    }
    if (ids.empty()) {
        return;
    }
    const auto ts = next_timestamp();
    std::string records;
    for (const auto& id : ids) {
        records += del_record(id, ts);
    }
    append_line(records);
    last_ts_ = ts;
    for (const auto& id : ids) {
        live_.erase(id);
    }
}

std::vector<TranslationUnit> TmStore::units() const
{
    std::vector<TranslationUnit> out;
    out.reserve(live_.size());
    for (std::size_t i = 0; i < log_.size(); ++i) {
        auto it = live_.find(log_[i].id);
        if (it != live_.end() && it->second == i) {
            out.push_back(log_[i]);
        }
    }
    return out;
}

const TranslationUnit* TmStore::find(const UnitId& id) const
{
    auto it = live_.find(id);
    return it == live_.end() ? nullptr : &log_[it->second];
}

std::vector<TranslationUnit> merged_view(const std::vector<TranslationUnit>& local,
                                         const std::vector<TranslationUnit>& global)
{
    std::vector<TranslationUnit> out;
    std::unordered_set<UnitId> seen;
    for (const auto& u : local) {
        if (seen.insert(u.id).second) {
            out.push_back(u);
        }
    }
    for (const auto& u : global) {
        if (seen.insert(u.id).second) {
            out.push_back(u);
        }
    }
    return out;
}

std::vector<TranslationUnit> merged_view(const TmStore& local, const TmStore* global)
{
    return merged_view(local.units(), global != nullptr ? global->units() : std::vector<TranslationUnit>{});
}

} // namespace tmem
