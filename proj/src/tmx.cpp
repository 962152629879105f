#include "tmem/tmx.hpp"

#include "tmem/error.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <memory>

namespace tmem {

namespace {

std::string primary_subtag(std::string_view lang)
{
    std::string out;
    for (char c : lang) {
        if (c == '-' || c == '_') {
            break;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct Tuv {
    std::string lang;
    std::string seg;
    std::size_t seg_count = 0;
};

struct ParseState {
    const TmxImportOptions* options = nullptr;
    TmxDocument doc;
    std::size_t depth = 0;
    bool saw_root = false;
    bool root_ok = false;

    bool in_tu = false;
    bool tu_bad = false;
    std::vector<Tuv> tuvs;
    bool in_tuv = false;
    bool in_seg = false;
    std::size_t skip_depth = 0; // > 0 while inside inline code elements

    void finish_tu();
};

std::string_view attr(const XML_Char** atts, std::string_view name)
{
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
        if (name == atts[i]) {
            return atts[i + 1];
        }
    }
    return {};
}

bool is_inline_code(std::string_view name)
{
    return name == "bpt" || name == "ept" || name == "it" || name == "ph" || name == "ut" || name == "sub";
}

void XMLCALL on_start(void* user, const XML_Char* name_c, const XML_Char** atts)
{
    auto& st = *static_cast<ParseState*>(user);
    const std::string_view name = name_c;
    ++st.depth;

    if (!st.saw_root) {
        st.saw_root = true;
        st.root_ok = name == "tmx";
        return;
    }
    if (st.in_seg) {
        if (st.skip_depth > 0 || is_inline_code(name)) {
            ++st.skip_depth;
        }
        return;
    }
    if (name == "header" && !st.in_tu) {
        auto& h = st.doc.header;
        if (auto v = attr(atts, "creationtool"); !v.empty()) h.creationtool = v;
        if (auto v = attr(atts, "creationtoolversion"); !v.empty()) h.creationtoolversion = v;
        h.srclang = attr(atts, "srclang");
        if (auto v = attr(atts, "adminlang"); !v.empty()) h.adminlang = v;
        if (auto v = attr(atts, "o-tmf"); !v.empty()) h.o_tmf = v;
    } else if (name == "tu") {
        st.in_tu = true;
        st.tu_bad = st.in_tuv; // nested tu is nonsense
        st.tuvs.clear();
    } else if (name == "tuv" && st.in_tu) {
        st.in_tuv = true;
        Tuv tuv;
        tuv.lang = attr(atts, "xml:lang");
        if (tuv.lang.empty()) {
            tuv.lang = attr(atts, "lang");
        }
        st.tuvs.push_back(std::move(tuv));
    } else if (name == "seg" && st.in_tuv) {
        st.in_seg = true;
        ++st.tuvs.back().seg_count;
    }
}

void XMLCALL on_end(void* user, const XML_Char* name_c)
{
    auto& st = *static_cast<ParseState*>(user);
    const std::string_view name = name_c;
    --st.depth;

    if (st.in_seg) {
        if (st.skip_depth > 0) {
            --st.skip_depth;
            return;
        }
        if (name == "seg") {
            st.in_seg = false;
        }
        return;
    }
    if (name == "tuv" && st.in_tuv) {
        st.in_tuv = false;
    } else if (name == "tu" && st.in_tu) {
        st.finish_tu();
        st.in_tu = false;
    }
}

void XMLCALL on_text(void* user, const XML_Char* s, int len)
{
    auto& st = *static_cast<ParseState*>(user);
    if (st.in_seg && st.skip_depth == 0) {
        st.tuvs.back().seg.append(s, static_cast<std::size_t>(len));
    }
}

void ParseState::finish_tu()
{
    auto malformed = [&] { ++doc.malformed; };
    if (tu_bad) {
        return malformed();
    }
    for (const auto& t : tuvs) {
        if (t.lang.empty() || t.seg_count != 1) {
            return malformed();
        }
    }

    std::string source_pref;
    if (options->source_lang) {
        source_pref = *options->source_lang;
    } else if (!doc.header.srclang.empty() && doc.header.srclang != "*all*") {
        source_pref = doc.header.srclang;
    }

    const Tuv* source = nullptr;
    std::vector<const Tuv*> rest;
    if (source_pref.empty()) {
        if (tuvs.size() != 2) {
            return malformed();
        }
        source = &tuvs[0];
        rest.push_back(&tuvs[1]);
    } else {
        const auto want = primary_subtag(source_pref);
        for (const auto& t : tuvs) {
            if (primary_subtag(t.lang) == want) {
                if (source != nullptr) {
                    return malformed();
                }
                source = &t;
            } else {
                rest.push_back(&t);
            }
        }
        if (source == nullptr) {
            return malformed();
        }
    }

    const Tuv* target = nullptr;
    if (options->target_lang) {
        const auto want = primary_subtag(*options->target_lang);
        for (const auto* t : rest) {
            if (primary_subtag(t->lang) == want) {
                if (target != nullptr) {
                    return malformed();
                }
                target = t;
            }
        }
    } else if (rest.size() == 1) {
        target = rest.front();
    }
    if (target == nullptr) {
        return malformed();
    }
    doc.pairs.push_back({source->seg, target->seg, source->lang, target->lang});
}

void escape_into(std::string& out, std::string_view text)
{
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        case '\r': out += "&#13;"; break;
        default: out += c;
        }
    }
}

std::string escape(std::string_view text)
{
    std::string out;
    escape_into(out, text);
    return out;
}

} // namespace

TmxDocument parse_tmx(std::string_view bytes, const TmxImportOptions& options)
{
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    if (!parser) {
        throw Error(ErrorCode::io, "cannot allocate XML parser");
    }
    ParseState st;
    st.options = &options;
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);

    if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw Error(ErrorCode::format,
                    std::string("TMX is not well-formed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                        " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
    }
    if (!st.root_ok) {
        throw Error(ErrorCode::format, "root element is not <tmx>");
    }
    return std::move(st.doc);
}

ImportSummary import_tmx(TmStore& store, std::string_view bytes, const TmxImportOptions& options, Scope scope,
                         const std::string& author)
{
    const auto doc = parse_tmx(bytes, options);
    ImportSummary summary;
    summary.malformed = doc.malformed;
    std::vector<CommitRequest> valid;
    for (const auto& pair : doc.pairs) {
        CommitRequest req;
        req.source = pair.source;
        req.target = pair.target;
        req.source_lang = pair.source_lang;
        req.target_lang = pair.target_lang;
        req.scope = scope;
        req.author = author;
        req.origin = Origin::imported;
        try {
            make_unit(req.source, req.target, req.source_lang, req.target_lang, {});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::validation) {
                throw;
            }
            ++summary.malformed;
            continue;
        }
        valid.push_back(std::move(req));
    }
    for (const auto& result : store.commit_all(valid)) {
        ++(result.created ? summary.added : summary.skipped);
    }
    return summary;
}

std::string export_tmx(std::vector<TranslationUnit> units, const TmxHeader& header)
{
    std::sort(units.begin(), units.end(), [](const TranslationUnit& a, const TranslationUnit& b) {
        if (a.meta.created_at != b.meta.created_at) {
            return a.meta.created_at < b.meta.created_at;
        }
        return a.id < b.id;
    });

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<tmx version=\"1.4\">\n";
    out += "  <header creationtool=\"" + escape(header.creationtool) + "\" creationtoolversion=\"" +
           escape(header.creationtoolversion) + "\" srclang=\"" + escape(header.srclang) + "\" adminlang=\"" +
           escape(header.adminlang) + "\" segtype=\"sentence\" datatype=\"plaintext\" o-tmf=\"" +
           escape(header.o_tmf) + "\"/>\n";
    out += "  <body>\n";
    for (const auto& u : units) {
        out += "    <tu>\n";
        for (const auto* seg : {&u.source, &u.target}) {
            out += "      <tuv xml:lang=\"";
            escape_into(out, seg->lang);
            out += "\"><seg>";
            escape_into(out, seg->raw);
            out += "</seg></tuv>\n";
        }
        out += "    </tu>\n";
    }
    out += "  </body>\n</tmx>\n";
    return out;
}

} // namespace tmem
