#include "tmem/synth.hpp"

#include "tmem/error.hpp"

#include <cctype>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace tmem {

std::uint64_t SeededRng::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw Error(ErrorCode::invalid_argument, "empty range");
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

namespace {

std::vector<std::string> words(const char* text)
{
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

struct Vocabulary {
    std::vector<std::string> det = words("the a this that every each some our their my your his her");
    std::vector<std::string> pron = words("they we he she it you i");
    std::vector<std::string> adj =
        words("good new old great small large big long young important different public private early "
              "simple clear strong happy short fresh quick slow cheap expensive beautiful famous popular "
              "safe useful correct local national special nice fine red white green blue");
    std::vector<std::string> noun = words(
        "proposal site menu service coffee day time year way man woman child world life hand place case week "
        "company system program question government number night point home water room mother area money story "
        "month book job business issue side house friend father power hour game line member car city name "
        "team idea body school office door person history party result morning student group problem "
        "translation memory sentence text document language translator database tool phrase report meeting "
        "plan project price quality product customer market table chair window street road train bus station "
        "letter phone computer software file page user garden river village teacher doctor");
    std::vector<std::string> verb = words(
        "recommends made provides takes gives finds uses wants needs calls asks keeps shows builds sends "
        "reviews translates accepts approves visits enjoys prefers orders explains prepares submits receives "
        "opens changes follows creates reads writes likes sells buys pays meets");
    std::vector<std::string> past = words(
        "recommended made provided took gave found used wanted needed called asked kept showed built sent "
        "reviewed translated accepted approved visited enjoyed preferred ordered explained prepared submitted "
        "received opened changed followed created read wrote liked sold bought paid met");
    std::vector<std::string> prep = words("for of in on at by with from into about over under near after before");
    std::vector<std::string> adv = words("often always never soon already quickly slowly carefully together again");
    std::vector<std::string> aux = words("will would can could should may must");
    std::vector<std::string> conj = words("and but or");
};

const Vocabulary& vocab()
{
    static const Vocabulary v;
    return v;
}

std::string capitalize(std::string s)
{
    if (!s.empty()) {
        s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    }
    return s;
}

std::string make_sentence(SeededRng& rng)
{
    const auto& v = vocab();
    std::vector<std::string> w;
    auto np = [&](bool with_adj) {
        w.push_back(rng.pick(v.det));
        if (with_adj) {
            w.push_back(rng.pick(v.adj));
        }
        w.push_back(rng.pick(v.noun));
    };
    auto pp = [&] {
        w.push_back(rng.pick(v.prep));
        np(rng.below(2) == 0);
    };

    std::string end = ".";
    switch (rng.below(5)) {
    case 0: // The new proposal recommends a good site for the city.
        np(rng.below(2) == 0);
        w.push_back(rng.pick(v.verb));
        np(rng.below(2) == 0);
        pp();
        break;
    case 1: // They reviewed our proposal with the team again.
        w.push_back(rng.pick(v.pron));
        w.push_back(rng.pick(v.past));
        np(rng.below(2) == 0);
        pp();
        w.push_back(rng.pick(v.adv));
        break;
    case 2: // Will they approve the plan for the village?
        w.push_back(rng.pick(v.aux));
        w.push_back(rng.pick(v.pron));
        w.push_back(rng.pick(v.verb));
        np(rng.below(2) == 0);
        pp();
        end = "?";
        break;
    case 3: // The teacher of the school often prepares a short report and a new plan.
        np(false);
        pp();
        w.push_back(rng.pick(v.adv));
        w.push_back(rng.pick(v.verb));
        np(true);
        w.push_back(rng.pick(v.conj));
        np(rng.below(2) == 0);
        break;
    default: // We must send the letter to the office before the meeting.
        w.push_back(rng.pick(v.pron));
        w.push_back(rng.pick(v.aux));
        w.push_back(rng.pick(v.verb));
        np(rng.below(2) == 0);
        pp();
        pp();
        break;
    }

    std::string out = capitalize(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
        out += ' ';
        out += w[i];
    }
    return out + end;
}

std::string translate(const std::string& sentence)
{
    std::istringstream in(sentence);
    std::string out;
    for (std::string w; in >> w;) {
        while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) {
            w.pop_back();
        }
        if (!out.empty()) {
            out += ' ';
        }
        out += pseudo_hindi(w);
    }
    return out + " ।";
}

} // namespace

std::string pseudo_hindi(const std::string& word)
{
    // One Devanagari syllable per Latin letter.
    static const char* const table[26] = {
        "अ", "ब", "क", "द", "ए", "फ", "ग", "ह", "इ", "ज", "क़", "ल", "म",
        "न", "ओ", "प", "क्", "र", "स", "त", "उ", "व", "ड", "क्स", "य", "ज़",
    };
    std::string out;
    for (char c : word) {
        const auto lower = std::tolower(static_cast<unsigned char>(c));
        if (lower >= 'a' && lower <= 'z') {
            out += table[lower - 'a'];
        }
    }
    return out;
}

std::vector<SentencePair> synthesize_corpus(std::size_t count, std::uint64_t seed)
{
    SeededRng rng(seed);
    std::unordered_set<std::string> seen;
    std::vector<SentencePair> out;
    out.reserve(count);
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > count * 100 + 1000) {
            throw Error(ErrorCode::sizing, "cannot generate enough distinct sentences");
        }
        auto s = make_sentence(rng);
        if (seen.insert(s).second) {
            auto t = translate(s);
            out.push_back({std::move(s), std::move(t)});
        }
    }
    return out;
}

std::vector<SentencePair> synthesize_oov(std::size_t count, std::uint64_t seed)
{
    // Every word starts with "xq", which no English word does.
    static const std::vector<std::string> syllables = words("zo ka ru mi te va pe lo bu ni sa do fe gu");
    SeededRng rng(seed);
    std::unordered_set<std::string> seen;
    std::vector<SentencePair> out;
    while (out.size() < count) {
        const std::size_t length = 4 + rng.below(6);
        std::string s;
        for (std::size_t i = 0; i < length; ++i) {
            std::string w = "xq";
            const std::size_t syl = 1 + rng.below(3);
            for (std::size_t j = 0; j < syl; ++j) {
                w += rng.pick(syllables);
            }
            if (!s.empty()) {
                s += ' ';
            }
            s += w;
        }
        s += '.';
        if (seen.insert(s).second) {
            auto t = translate(s);
            out.push_back({std::move(s), std::move(t)});
        }
    }
    return out;
}

} // namespace tmem
