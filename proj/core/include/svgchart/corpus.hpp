#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svgchart::corpus {

struct RobotsDisallowed : std::runtime_error {
    explicit RobotsDisallowed(const std::string& url)
        : std::runtime_error("disallowed by robots.txt: " + url) {}
};
struct Timeout : std::runtime_error {
    explicit Timeout(const std::string& url) : std::runtime_error("timeout fetching " + url) {}
};
struct HttpError : std::runtime_error {
    int status;
    HttpError(const std::string& url, int s)
        : std::runtime_error("HTTP " + std::to_string(s) + " for " + url), status(s) {}
};
struct TooManyRedirects : std::runtime_error {
    explicit TooManyRedirects(const std::string& url)
        : std::runtime_error("too many redirects from " + url) {}
};

struct CrawlPolicy {
    int max_pages = 100;
    int max_depth = 1;
    double per_host_delay = 1.0;  // seconds
    bool same_host_only = true;
    std::string user_agent = "svgchart-crawler/0.1";
    bool obey_robots = true;
    double timeout = 10.0;  // seconds
    int jobs = 4;
};

struct CorpusEntry {
    std::string id;          // sha256 hex of the SVG bytes
    std::string source_url;
    std::string fetched_at;  // ISO-8601 UTC
    std::string svg_path;    // relative to the corpus directory
    std::string excluded;    // empty, or an exclusion reason
    std::string label;       // empty when unlabeled
};

struct PageDocument {
    std::string url;
    std::string body;
    std::string content_type;
};

struct ExtractedSvg {
    std::string svg_text;             // standalone: namespace + page styles
    std::string exclusion;            // empty, or "animation/script"
};

// Lenient scan for inline <svg> subtrees. Page-level <style> text is appended
// to each extracted SVG; the selector subset makes extra rules harmless.
std::vector<ExtractedSvg> extract_svgs_from_html(const PageDocument& page);

// Anchor hrefs resolved against the page URL; http(s) only.
std::vector<std::string> extract_links(const PageDocument& page);

std::string sha256_hex(std::string_view bytes);

// corpus/objects/<hash>.svg + corpus/manifest.jsonl + corpus/crawl.log.
// The manifest on disk is always sorted by id; adding an existing id is a
// no-op, which makes crawls and ingests idempotent.
class CorpusStore {
  public:
    explicit CorpusStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::vector<CorpusEntry> entries() const;
    bool contains(const std::string& id) const;

    // Returns true if the entry was new; writes the object file and manifest.
    bool add(const CorpusEntry& entry, std::string_view svg_bytes);
    void log(const std::string& line);
    void save() const;

  private:
    std::filesystem::path dir_;
    std::map<std::string, CorpusEntry> by_id_;
    mutable std::mutex mutex_;
};

class Fetcher {
  public:
    explicit Fetcher(CrawlPolicy policy) : policy_(std::move(policy)) {}

    // Honors robots.txt (for User-agent: *), per-host delay, <=5 redirects.
    PageDocument fetch_page(const std::string& url);

  private:
    struct HostState {
        std::mutex mutex;                 // serializes requests per host
        double last_request_end = -1e18;  // monotonic seconds
        bool robots_loaded = false;
        std::vector<std::string> disallow;
    };

    HostState& host_state(const std::string& key);
    void wait_for_slot(HostState& host);
    PageDocument fetch_raw(const std::string& url);  // single request w/ redirects
    void load_robots(HostState& host, const std::string& scheme_host);
    bool allowed_by_robots(HostState& host, const std::string& path);

    CrawlPolicy policy_;
    std::mutex map_mutex_;
    std::map<std::string, std::unique_ptr<HostState>> hosts_;
};

std::vector<CorpusEntry> crawl(const std::vector<std::string>& seeds, const CrawlPolicy& policy,
                               CorpusStore& store);

// Labels file: "filename<TAB>label" lines.
std::vector<CorpusEntry> ingest(const std::filesystem::path& svg_dir,
                                const std::optional<std::filesystem::path>& labels_file,
                                CorpusStore& store);

// URL helpers (http/https only).
struct Url {
    std::string scheme, host, path;  // path includes query; defaults to "/"
    int port = 0;                    // 0 means scheme default
    std::string origin() const;      // scheme://host[:port]
    std::string full() const { return origin() + path; }
};
std::optional<Url> parse_url(std::string_view url);
std::optional<std::string> resolve_href(const std::string& base_url, std::string_view href);

}  // namespace svgchart::corpus
