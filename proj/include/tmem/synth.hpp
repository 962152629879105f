#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tmem {

/// mt19937_64 with an explicit bounded draw, so seeded output is identical
/// across standard libraries (std::uniform_int_distribution is not).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    std::uint64_t next() { return engine_(); }

    template <typename T>
    const T& pick(const std::vector<T>& v)
    {
        return v[below(v.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

struct SentencePair {
    std::string source;
    std::string target;
};

/// Distinct English-like sentences built from templates over a fixed
/// vocabulary, each paired with a Devanagari pseudo-translation.
std::vector<SentencePair> synthesize_corpus(std::size_t count, std::uint64_t seed);

/// Sentences whose words never occur in synthesize_corpus output or in the
/// shipped lexicon.
std::vector<SentencePair> synthesize_oov(std::size_t count, std::uint64_t seed);

/// Deterministic letter-by-letter Devanagari rendering of a Latin word.
std::string pseudo_hindi(const std::string& word);

} // namespace tmem
