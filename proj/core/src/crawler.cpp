#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <set>
#include <thread>

#include "httplib.h"
#include "svgchart/corpus.hpp"

namespace svgchart::corpus {

namespace {

double monotonic_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string trim(std::string s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Disallow prefixes from every "User-agent: *" group.
std::vector<std::string> parse_robots(const std::string& body) {
    std::vector<std::string> disallow;
    bool group_applies = false;
    bool last_was_ua = false;
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t nl = body.find('\n', pos);
        std::string line = body.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? body.size() + 1 : nl + 1;

        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        size_t colon = line.find(':');
        if (colon == std::string::npos) {
            last_was_ua = false;
            continue;
        }
        std::string field = lower(trim(line.substr(0, colon)));
        std::string value = trim(line.substr(colon + 1));
        if (field == "user-agent") {
            if (!last_was_ua) group_applies = false;
            if (value == "*") group_applies = true;
            last_was_ua = true;
        } else if (field == "disallow") {
            last_was_ua = false;
            if (group_applies && !value.empty()) disallow.push_back(value);
        } else {
            last_was_ua = false;
        }
    }
    return disallow;
}

}  // namespace

Fetcher::HostState& Fetcher::host_state(const std::string& key) {
    std::lock_guard lock(map_mutex_);
    auto& slot = hosts_[key];
    if (!slot) slot = std::make_unique<HostState>();
    return *slot;
}

void Fetcher::wait_for_slot(HostState& host) {
    double wait = host.last_request_end + policy_.per_host_delay - monotonic_seconds();
    if (wait > 0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
}

PageDocument Fetcher::fetch_raw(const std::string& url) {
    std::string current = url;
    for (int hop = 0; hop <= 5; ++hop) {
        auto parsed = parse_url(current);
        if (!parsed) throw HttpError(current, 0);

        httplib::Client client(parsed->origin());
        client.set_connection_timeout(std::chrono::duration<double>(policy_.timeout));
        client.set_read_timeout(std::chrono::duration<double>(policy_.timeout));
        client.set_follow_location(false);

        httplib::Headers headers{{"User-Agent", policy_.user_agent}};
        auto res = client.Get(parsed->path, headers);
        if (!res) {
            auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write)
                throw Timeout(current);
            throw HttpError(current, 0);
        }
        if (res->status >= 300 && res->status < 400) {
            std::string location = res->get_header_value("Location");
            auto next = resolve_href(current, location);
            if (!next) throw HttpError(current, res->status);
            if (hop == 5) throw TooManyRedirects(url);
            current = *next;
            continue;
        }
        if (res->status != 200) throw HttpError(current, res->status);

        PageDocument page;
        page.url = current;
        page.body = res->body;
        page.content_type = res->get_header_value("Content-Type");
        return page;
    }
    throw TooManyRedirects(url);
}

void Fetcher::load_robots(HostState& host, const std::string& scheme_host) {
    if (host.robots_loaded) return;
    host.robots_loaded = true;
    try {
        wait_for_slot(host);
        PageDocument robots = fetch_raw(scheme_host + "/robots.txt");
        host.last_request_end = monotonic_seconds();
        host.disallow = parse_robots(robots.body);
    } catch (const std::exception&) {
        host.last_request_end = monotonic_seconds();
        // unreachable or missing robots.txt: everything allowed
    }
}

bool Fetcher::allowed_by_robots(HostState& host, const std::string& path) {
    for (const std::string& prefix : host.disallow)
        if (path.starts_with(prefix)) return false;
    return true;
}

PageDocument Fetcher::fetch_page(const std::string& url) {
    auto parsed = parse_url(url);
    if (!parsed) throw HttpError(url, 0);

    HostState& host = host_state(parsed->origin());
    std::lock_guard serialize(host.mutex);

    if (policy_.obey_robots) {
        load_robots(host, parsed->origin());
        if (!allowed_by_robots(host, parsed->path)) throw RobotsDisallowed(url);
    }

    wait_for_slot(host);
    try {
        PageDocument page = fetch_raw(url);
        host.last_request_end = monotonic_seconds();
        return page;
    } catch (...) {
        host.last_request_end = monotonic_seconds();
        throw;
    }
}

std::vector<CorpusEntry> crawl(const std::vector<std::string>& seeds, const CrawlPolicy& policy,
                               CorpusStore& store) {
    if (seeds.empty()) throw std::runtime_error("no seeds");

    Fetcher fetcher(policy);

    std::mutex mutex;
    std::condition_variable cv;
    std::deque<std::pair<std::string, int>> queue;
    std::set<std::string> visited;
    int fetched = 0;
    int in_flight = 0;
    std::vector<CorpusEntry> added;

    for (const std::string& seed : seeds) {
        if (visited.insert(seed).second) queue.emplace_back(seed, 0);
    }

    auto worker = [&] {
        for (;;) {
            std::string url;
            int depth;
            {
                std::unique_lock lock(mutex);
                cv.wait(lock, [&] { return !queue.empty() || in_flight == 0; });
                if (fetched >= policy.max_pages) queue.clear();
                if (queue.empty()) {
                    if (in_flight == 0) {
                        cv.notify_all();
                        return;
                    }
                    continue;  // spurious-safe: wait again for in-flight discoveries
                }
                std::tie(url, depth) = queue.front();
                queue.pop_front();
                ++fetched;
                ++in_flight;
            }

            std::vector<std::pair<std::string, int>> discovered;
            try {
                PageDocument page = fetcher.fetch_page(url);
                store.log("fetched " + url);
                std::string ct = lower(page.content_type);
                bool html_like = ct.empty() || ct.find("html") != std::string::npos ||
                                 ct.find("xml") != std::string::npos;
                if (html_like) {
                    for (const ExtractedSvg& svg : extract_svgs_from_html(page)) {
                        CorpusEntry entry;
                        entry.id = sha256_hex(svg.svg_text);
                        entry.source_url = page.url;
                        entry.fetched_at = iso_now();
                        entry.svg_path = "objects/" + entry.id + ".svg";
                        entry.excluded = svg.exclusion;
                        if (store.add(entry, svg.svg_text)) {
                            std::lock_guard lock(mutex);
                            added.push_back(entry);
                        }
                    }
                    if (depth < policy.max_depth) {
                        auto page_host = parse_url(page.url);
                        for (const std::string& link : extract_links(page)) {
                            if (policy.same_host_only) {
                                auto link_host = parse_url(link);
                                if (!link_host || !page_host ||
                                    link_host->host != page_host->host)
                                    continue;
                            }
                            discovered.emplace_back(link, depth + 1);
                        }
                    }
                }
            } catch (const std::exception& e) {
                store.log(std::string("error ") + url + ": " + e.what());
            }

            {
                std::lock_guard lock(mutex);
                for (auto& [link, d] : discovered)
                    if (visited.insert(link).second) queue.emplace_back(link, d);
                --in_flight;
            }
            cv.notify_all();
        }
    };

    int jobs = std::max(1, policy.jobs);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(jobs));
    for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::sort(added.begin(), added.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    return added;
}

}  // namespace svgchart::corpus
