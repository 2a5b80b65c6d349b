#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdspk {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ContextEntry {
    std::string context_id;
    std::vector<std::filesystem::path> utterances;  // sorted by filename
};

struct SpeakerEntry {
    std::string speaker_id;
    std::vector<ContextEntry> contexts;  // sorted by context id
    std::string test_context_id;         // reserved for evaluation

    const ContextEntry* test_context() const {
        for (const auto& ctx : contexts)
            if (ctx.context_id == test_context_id) return &ctx;
        return nullptr;
    }
};

// Deterministic view of a root/<speaker>/<context>/<utterance>.wav tree.
// Directory enumeration order never leaks through: every level is sorted.
struct DatasetIndex {
    std::vector<SpeakerEntry> speakers;          // eligible speakers, sorted by id
    std::vector<std::string> excluded_speakers;  // sorted by id
    std::vector<std::string> warnings;           // human-readable, one per exclusion
};

// Walks the tree and applies the split rule: per speaker, reserve the context
// with the fewest utterances among those holding at least five; ties go to
// the lexicographically first context id. Speakers with fewer than two
// contexts, or with no context of five or more utterances, are excluded with
// a warning. Throws DatasetError when the root is missing or no speaker
// survives.
DatasetIndex index_dataset(const std::filesystem::path& root);

}  // namespace hdspk
