#include "tmem/service.hpp"

#include "tmem/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>

namespace tmem {

namespace {

using json = nlohmann::json;

constexpr const char* kTmxContentType = "application/xml; charset=utf-8";

class ApiError : public std::runtime_error {
public:
    ApiError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status_(status), code_(std::move(code)) {}

    int status() const { return status_; }
    const std::string& code() const { return code_; }

private:
    int status_;
    std::string code_;
};

HttpResponse json_response(int status, const json& body)
{
    return {status, "application/json", body.dump()};
}

HttpResponse error_response(int status, const std::string& code, const std::string& message)
{
    return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

int status_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::io: return 503;
    case ErrorCode::not_found: return 404;
    case ErrorCode::duplicate_unit: return 409;
    default: return 400;
    }
}

json with_engine_params(const Engine& engine, json body)
{
    body["k"] = engine.config().k;
    body["order"] = engine.config().order;
    return body;
}

json row_json(const MatchRow& row)
{
    return {{"rank", row.rank},
            {"score", row.score.value},
            {"kind", std::string(to_string(row.kind))},
            {"source", row.source},
            {"target", row.target},
            {"unit_id", row.unit_id}};
}

json parse_body(const HttpRequest& req)
{
    json body;
    try {
        body = json::parse(req.body);
    } catch (const json::exception&) {
        throw ApiError(400, "malformed_json", "request body is not valid JSON");
    }
    if (!body.is_object()) {
        throw ApiError(400, "malformed_json", "request body must be a JSON object");
    }
    return body;
}

std::string required_string(const json& body, const char* field)
{
    auto it = body.find(field);
    if (it == body.end() || !it->is_string()) {
        throw ApiError(400, "missing_field", std::string("field '") + field + "' must be a string");
    }
    return it->get<std::string>();
}

std::string optional_string(const json& body, const char* field, std::string fallback)
{
    auto it = body.find(field);
    if (it == body.end() || it->is_null()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw ApiError(400, "invalid_field", std::string("field '") + field + "' must be a string");
    }
    return it->get<std::string>();
}

std::size_t limit_of(const json& body)
{
    auto it = body.find("limit");
    if (it == body.end() || it->is_null()) {
        return kSuggestionsPerPhrase;
    }
    if (!it->is_number_integer() || it->get<long long>() < 1) {
        throw ApiError(400, "invalid_limit", "limit must be a positive integer");
    }
    return it->get<std::size_t>();
}

Scope scope_param(const std::string& text)
{
    if (auto s = parse_scope(text)) {
        return *s;
    }
    throw ApiError(400, "invalid_scope", "scope must be local or global");
}

std::string param(const HttpRequest& req, const std::string& name, std::string fallback)
{
    auto it = req.params.find(name);
    return it == req.params.end() ? fallback : it->second;
}

HttpResponse handle_health(Engine& engine)
{
    return json_response(200, with_engine_params(engine, {{"status", "ok"}}));
}

HttpResponse handle_stats(Engine& engine)
{
    const auto s = engine.stats();
    return json_response(200, with_engine_params(engine, {{"units", s.units},
                                                          {"local_units", s.local_units},
                                                          {"global_units", s.global_units},
                                                          {"grams", s.grams},
                                                          {"words", s.words},
                                                          {"global_store", engine.has_global()}}));
}

HttpResponse handle_query(Engine& engine, const HttpRequest& req)
{
    const auto body = parse_body(req);
    const auto text = required_string(body, "text");
    json results = json::array();
    for (const auto& row : engine.query(text, limit_of(body))) {
        results.push_back(row_json(row));
    }
    return json_response(200, with_engine_params(engine, {{"results", results}}));
}

HttpResponse handle_suggest(Engine& engine, const HttpRequest& req)
{
    const auto body = parse_body(req);
    const auto text = required_string(body, "text");
    const auto view = engine.suggest(text, limit_of(body));

    json sentences = json::array();
    for (const auto& row : view.sentence_matches) {
        sentences.push_back(row_json(row));
    }
    json phrases = json::array();
    for (const auto& p : view.phrase_matches) {
        json suggestions = json::array();
        for (const auto& s : p.suggestions) {
            suggestions.push_back({{"rank", s.rank},
                                   {"score", s.score.value},
                                   {"source", s.source},
                                   {"target", s.target},
                                   {"unit_id", s.unit_id}});
        }
        phrases.push_back({{"phrase", p.phrase},
                           {"span", {p.span.start, p.span.end}},
                           {"suggestions", suggestions}});
    }
    return json_response(200, with_engine_params(engine, {{"primary", view.primary ? row_json(*view.primary) : json()},
                                                          {"sentence_matches", sentences},
                                                          {"phrase_matches", phrases}}));
}

HttpResponse handle_commit(Engine& engine, const HttpRequest& req)
{
    const auto body = parse_body(req);
    CommitRequest c;
    c.source = required_string(body, "source");
    c.target = required_string(body, "target");
    c.scope = scope_param(optional_string(body, "scope", "local"));
    c.author = optional_string(body, "author", "");
    c.source_lang = optional_string(body, "source_lang", engine.config().source_lang);
    c.target_lang = optional_string(body, "target_lang", engine.config().target_lang);
    if (c.scope == Scope::global && !engine.has_global()) {
        throw ApiError(400, "no_global_store", "the server has no global store configured");
    }

    const auto result = engine.commit(c);
    const auto& u = result.unit;
    return json_response(200, with_engine_params(engine, {{"created", result.created},
                                                          {"unit",
                                                           {{"unit_id", u.id},
                                                            {"source", u.source.raw},
                                                            {"target", u.target.raw},
                                                            {"source_lang", u.source.lang},
                                                            {"target_lang", u.target.lang},
                                                            {"scope", std::string(to_string(u.meta.scope))},
                                                            {"author", u.meta.author},
                                                            {"created_at", u.meta.created_at},
                                                            {"origin", std::string(to_string(u.meta.origin))}}}}));
}

HttpResponse handle_import(Engine& engine, const HttpRequest& req)
{
    const auto scope = scope_param(param(req, "scope", "local"));
    if (scope == Scope::global && !engine.has_global()) {
        throw ApiError(400, "no_global_store", "the server has no global store configured");
    }
    ImportSummary summary;
    try {
        summary = engine.import_tmx(req.body, scope, param(req, "author", ""));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::format) {
            throw ApiError(400, "invalid_tmx", e.what());
        }
        throw;
    }
    return json_response(200, with_engine_params(engine, {{"added", summary.added},
                                                          {"skipped", summary.skipped},
                                                          {"malformed", summary.malformed}}));
}

HttpResponse handle_export(Engine& engine, const HttpRequest& req)
{
    const auto scope_text = param(req, "scope", "all");
    ExportScope scope;
    if (scope_text == "local") {
        scope = ExportScope::local;
    } else if (scope_text == "global") {
        if (!engine.has_global()) {
            throw ApiError(400, "no_global_store", "the server has no global store configured");
        }
        scope = ExportScope::global;
    } else if (scope_text == "all") {
        scope = ExportScope::all;
    } else {
        throw ApiError(400, "invalid_scope", "scope must be local, global or all");
    }
    return {200, kTmxContentType, engine.export_tmx(scope)};
}

} // namespace

HttpResponse handle_request(Engine& engine, const HttpRequest& request)
{
    struct Route {
        const char* method;
        const char* path;
        HttpResponse (*fn)(Engine&, const HttpRequest&);
    };
    static const Route routes[] = {
        {"GET", "/api/health", [](Engine& e, const HttpRequest&) { return handle_health(e); }},
        {"GET", "/api/stats", [](Engine& e, const HttpRequest&) { return handle_stats(e); }},
        {"POST", "/api/query", handle_query},
        {"POST", "/api/suggest", handle_suggest},
        {"POST", "/api/commit", handle_commit},
        {"POST", "/api/import", handle_import},
        {"GET", "/api/export", handle_export},
    };

    bool path_known = false;
    for (const auto& r : routes) {
        if (request.path != r.path) {
            continue;
        }
        path_known = true;
        if (request.method != r.method) {
            continue;
        }
        try {
            return r.fn(engine, request);
        } catch (const ApiError& e) {
            return error_response(e.status(), e.code(), e.what());
        } catch (const Error& e) {
            return error_response(status_for(e.code()), std::string(to_string(e.code())), e.what());
        } catch (const std::exception& e) {
            return error_response(500, "internal_error", e.what());
        }
    }
    if (path_known) {
        return error_response(405, "method_not_allowed", request.method + " not allowed on " + request.path);
    }
    return error_response(404, "not_found", "no route for " + request.path);
}

struct HttpServer::Impl {
    Engine& engine;
    ServerOptions options;
    httplib::Server server;

    Impl(Engine& e, ServerOptions o) : engine(e), options(std::move(o)) {}

    void apply_cors(const httplib::Request& req, httplib::Response& res) const
    {
        const auto origin = req.get_header_value("Origin");
        if (origin.empty()) {
            return;
        }
        const auto& allowed = options.cors_origins;
        if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
            res.set_header("Access-Control-Allow-Origin", "*");
        } else if (std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        } else {
            return;
        }
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }

    void dispatch(const httplib::Request& req, httplib::Response& res)
    {
        HttpRequest r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) {
            r.params.emplace(k, v);
        }
        r.body = req.body;
        const auto out = handle_request(engine, r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
        apply_cors(req, res);
    }
};

HttpServer::HttpServer(Engine& engine, ServerOptions options)
    : impl_(std::make_unique<Impl>(engine, std::move(options)))
{
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
    auto& svr = impl_->server;
    svr.Get(R"(/.*)", handler);
    svr.Post(R"(/.*)", handler);
    svr.Put(R"(/.*)", handler);
    svr.Delete(R"(/.*)", handler);
    svr.Options(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        res.status = 204;
        impl_->apply_cors(req, res);
    });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind()
{
    auto& o = impl_->options;
    if (o.port == 0) {
        return impl_->server.bind_to_any_port(o.host);
    }
    return impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
}

bool HttpServer::listen()
{
    return impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    impl_->server.stop();
}

} // namespace tmem
