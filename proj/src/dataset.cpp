#include "hdspk/dataset.hpp"

#include <algorithm>
#include <cctype>

namespace hdspk {

namespace fs = std::filesystem;

namespace {

bool has_wav_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".wav";
}

std::vector<fs::path> sorted_subdirectories(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

// The split rule: fewest utterances among contexts with >= 5; ties resolve to
// the lexicographically first context id. Contexts arrive sorted by id, so a
// strict < on the count keeps the first of any tie.
std::string pick_test_context(const std::vector<ContextEntry>& contexts) {
    std::string best;
    std::size_t best_count = 0;
    for (const auto& ctx : contexts) {
        if (ctx.utterances.size() < 5) continue;
        if (best.empty() || ctx.utterances.size() < best_count) {
            best = ctx.context_id;
            best_count = ctx.utterances.size();
        }
    }
    return best;
}

}  // namespace

DatasetIndex index_dataset(const fs::path& root) {
    if (!fs::exists(root)) throw DatasetError("dataset root does not exist: " + root.string());
    if (!fs::is_directory(root))
        throw DatasetError("dataset root is not a directory: " + root.string());

    DatasetIndex index;
    for (const auto& speaker_dir : sorted_subdirectories(root)) {
        SpeakerEntry speaker;
        speaker.speaker_id = speaker_dir.filename().string();

        for (const auto& context_dir : sorted_subdirectories(speaker_dir)) {
            ContextEntry ctx;
            ctx.context_id = context_dir.filename().string();
            for (const auto& entry : fs::directory_iterator(context_dir))
                if (entry.is_regular_file() && has_wav_extension(entry.path()))
                    ctx.utterances.push_back(entry.path());
            std::sort(ctx.utterances.begin(), ctx.utterances.end());
            if (!ctx.utterances.empty()) speaker.contexts.push_back(std::move(ctx));
        }

        if (speaker.contexts.size() < 2) {
            index.excluded_speakers.push_back(speaker.speaker_id);
            index.warnings.push_back("speaker " + speaker.speaker_id + " excluded: has " +
                                     std::to_string(speaker.contexts.size()) +
                                     " non-empty context(s), need at least 2");
            continue;
        }
        speaker.test_context_id = pick_test_context(speaker.contexts);
        if (speaker.test_context_id.empty()) {
            index.excluded_speakers.push_back(speaker.speaker_id);
            index.warnings.push_back("speaker " + speaker.speaker_id +
                                     " excluded: no context holds at least 5 utterances");
            continue;
        }
        index.speakers.push_back(std::move(speaker));
    }

    if (index.speakers.empty())
        throw DatasetError("no eligible speakers under " + root.string() +
                           " (need speaker/context/utterance.wav with >= 2 contexts and one "
                           "context of >= 5 utterances per speaker)");
    return index;
}

}  // namespace hdspk
