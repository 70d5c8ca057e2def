#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "svgchart/corpus.hpp"
#include "svgchart/svg_dom.hpp"

namespace svgchart::corpus {

namespace {

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void atomic_write(const std::filesystem::path& target, const std::string& data) {
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw std::runtime_error("failed to write " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool tree_has_excluded(const svg::ElementNode& node) {
    if (node.tag == "animate" || node.tag == "animateTransform" ||
        node.tag == "animateMotion" || node.tag == "script")
        return true;
    for (const auto& child : node.children)
        if (tree_has_excluded(child)) return true;
    return false;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

CorpusStore::CorpusStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_ / "objects");
    std::filesystem::path manifest = dir_ / "manifest.jsonl";
    if (!std::filesystem::exists(manifest)) return;

    std::ifstream in(manifest);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        CorpusEntry e;
        e.id = j.value("id", "");
        e.source_url = j.value("source_url", "");
        e.fetched_at = j.value("fetched_at", "");
        e.svg_path = j.value("svg_path", "");
        e.excluded = j.value("excluded", "");
        e.label = j.value("label", "");
        if (!e.id.empty()) by_id_[e.id] = std::move(e);
    }
}

std::vector<CorpusEntry> CorpusStore::entries() const {
    std::lock_guard lock(mutex_);
    std::vector<CorpusEntry> out;
    out.reserve(by_id_.size());
    for (const auto& [id, entry] : by_id_) out.push_back(entry);
    return out;  // sorted by id via map order
}

bool CorpusStore::contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return by_id_.contains(id);
}

bool CorpusStore::add(const CorpusEntry& entry, std::string_view svg_bytes) {
    {
        std::lock_guard lock(mutex_);
        if (by_id_.contains(entry.id)) return false;
        by_id_[entry.id] = entry;
    }
    atomic_write(dir_ / entry.svg_path, std::string(svg_bytes));
    save();
    return true;
}

void CorpusStore::log(const std::string& line) {
    std::lock_guard lock(mutex_);
    std::ofstream out(dir_ / "crawl.log", std::ios::app);
    out << line << "\n";
}

void CorpusStore::save() const {
    std::lock_guard lock(mutex_);
    std::string data;
    for (const auto& [id, e] : by_id_) {
        nlohmann::json j;
        j["id"] = e.id;
        j["source_url"] = e.source_url;
        j["fetched_at"] = e.fetched_at;
        j["svg_path"] = e.svg_path;
        j["excluded"] = e.excluded;
        j["label"] = e.label;
        data += j.dump();
        data += "\n";
    }
    atomic_write(dir_ / "manifest.jsonl", data);
}

std::vector<CorpusEntry> ingest(const std::filesystem::path& svg_dir,
                                const std::optional<std::filesystem::path>& labels_file,
                                CorpusStore& store) {
    if (!std::filesystem::is_directory(svg_dir))
        throw std::runtime_error("not a directory: " + svg_dir.string());

    std::map<std::string, std::string> labels;
    if (labels_file) {
        std::ifstream in(*labels_file);
        if (!in) throw std::runtime_error("cannot open labels file " + labels_file->string());
        std::string line;
        while (std::getline(in, line)) {
            size_t tab = line.find('\t');
            if (tab == std::string::npos) continue;
            labels[line.substr(0, tab)] = line.substr(tab + 1);
        }
    }

    std::vector<std::filesystem::path> files;
    for (const auto& dirent : std::filesystem::directory_iterator(svg_dir))
        if (dirent.is_regular_file() && dirent.path().extension() == ".svg")
            files.push_back(dirent.path());
    std::sort(files.begin(), files.end());

    std::vector<CorpusEntry> added;
    for (const auto& file : files) {
        std::string bytes = read_file(file);
        svg::SvgDocument doc;
        try {
            doc = svg::parse_svg(bytes);
        } catch (const std::exception& e) {
            store.log("skip " + file.string() + ": " + e.what());
            continue;
        }
        CorpusEntry entry;
        entry.id = sha256_hex(bytes);
        entry.source_url = "file://" + std::filesystem::absolute(file).string();
        entry.fetched_at = iso_now();
        entry.svg_path = "objects/" + entry.id + ".svg";
        if (tree_has_excluded(doc.root)) entry.excluded = "animation/script";
        if (entry.excluded.empty()) {
            auto it = labels.find(file.filename().string());
            if (it != labels.end()) entry.label = it->second;
        }
        if (store.add(entry, bytes)) added.push_back(entry);
    }
    return added;
}

}  // namespace svgchart::corpus
