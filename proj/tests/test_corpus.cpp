#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "svgchart/corpus.hpp"
#include "svgchart/svg_dom.hpp"

using namespace svgchart::corpus;
namespace fs = std::filesystem;

namespace {

PageDocument page(const std::string& body) {
    return {"http://example.test/page", body, "text/html"};
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("svgchart_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("extract one inline svg") {
    auto svgs = extract_svgs_from_html(page("<html><body><svg width='3' height='3'><rect/></svg></body></html>"));
    REQUIRE(svgs.size() == 1);
    CHECK(svgs[0].exclusion.empty());
    auto doc = svgchart::svg::parse_svg(svgs[0].svg_text);
    CHECK(svgchart::svg::flatten_elements(doc).size() == 1);
}

TEST_CASE("animated svg flagged for exclusion") {
    auto svgs = extract_svgs_from_html(page("<svg><animate/></svg>"));
    REQUIRE(svgs.size() == 1);
    CHECK(svgs[0].exclusion == "animation/script");
    auto scripted = extract_svgs_from_html(page("<svg><script>x</script></svg>"));
    REQUIRE(scripted.size() == 1);
    CHECK(scripted[0].exclusion == "animation/script");
}

TEST_CASE("inline only: img references are not extracted") {
    auto svgs = extract_svgs_from_html(
        page("<svg id='a'/><p><svg id='b'/></p><svg id='c'/><img src='x.svg'>"));
    CHECK(svgs.size() == 3);
}

TEST_CASE("page styles are appended to extracted svgs") {
    auto svgs = extract_svgs_from_html(
        page("<style>.k{fill:red}</style><svg><rect class='k'/></svg>"));
    REQUIRE(svgs.size() == 1);
    auto doc = svgchart::svg::parse_svg(svgs[0].svg_text);
    CHECK(doc.stylesheet_text.find(".k{fill:red}") != std::string::npos);
}

TEST_CASE("extraction adds missing namespace and handles nesting") {
    auto svgs = extract_svgs_from_html(page("<svg><svg><rect/></svg><circle r='1'/></svg>"));
    REQUIRE(svgs.size() == 1);  // nested svg stays inside its parent's extraction
    CHECK(svgs[0].svg_text.find("xmlns") != std::string::npos);
    auto doc = svgchart::svg::parse_svg(svgs[0].svg_text);
    CHECK(svgchart::svg::flatten_elements(doc).size() == 2);
}

TEST_CASE("extract_links resolves against the page url") {
    auto links = extract_links({"http://example.test/a/b.html",
                                "<a href='c.html'>x</a>"
                                "<a href=\"/root.html\">y</a>"
                                "<a href='http://other.test/z'>z</a>"
                                "<a href='#frag'>f</a>"
                                "<a href='javascript:void(0)'>j</a>"
                                "<a href='../up.html'>u</a>",
                                "text/html"});
    REQUIRE(links.size() == 4);
    CHECK(links[0] == "http://example.test/a/c.html");
    CHECK(links[1] == "http://example.test/root.html");
    CHECK(links[2] == "http://other.test/z");
    CHECK(links[3] == "http://example.test/up.html");
}

TEST_CASE("url parsing and resolution") {
    auto u = parse_url("HTTP://Example.Test:8080/path?q=1#frag");
    REQUIRE(u);
    CHECK(u->scheme == "http");
    CHECK(u->host == "example.test");
    CHECK(u->port == 8080);
    CHECK(u->path == "/path?q=1");
    CHECK(u->origin() == "http://example.test:8080");

    CHECK(parse_url("http://host.test")->path == "/");
    CHECK(parse_url("ftp://host.test") == std::nullopt);
    CHECK(parse_url("not a url") == std::nullopt);
    CHECK(parse_url("https://host.test:443/x")->origin() == "https://host.test");
}

TEST_CASE("sha256 is the standard digest") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("corpus store dedups by content hash and persists sorted") {
    auto dir = fresh_dir("store");
    {
        CorpusStore store(dir);
        CorpusEntry e1{sha256_hex("<svg/>"), "http://a.test/", "2026-01-01T00:00:00Z",
                       "objects/" + sha256_hex("<svg/>") + ".svg", "", ""};
        CHECK(store.add(e1, "<svg/>"));
        CHECK(!store.add(e1, "<svg/>"));  // idempotent
        CorpusEntry e2 = e1;
        e2.id = sha256_hex("<svg width='1'/>");
        e2.svg_path = "objects/" + e2.id + ".svg";
        CHECK(store.add(e2, "<svg width='1'/>"));
    }
    CorpusStore reloaded(dir);
    auto entries = reloaded.entries();
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].id < entries[1].id);
    CHECK(fs::exists(dir / entries[0].svg_path));
}

TEST_CASE("ingest labels, skips malformed files, and is idempotent") {
    auto dir = fresh_dir("ingest_src");
    auto corpus_dir = fresh_dir("ingest_corpus");
    std::ofstream(dir / "a.svg") << "<svg width='5' height='5'><rect/></svg>";
    std::ofstream(dir / "b.svg") << "<svg width='5' height='5'><circle r='2'/></svg>";
    std::ofstream(dir / "c.svg") << "<svg><broken";
    std::ofstream(dir / "anim.svg") << "<svg><animate/></svg>";
    std::ofstream(dir / "labels.tsv") << "a.svg\tbar\n";

    CorpusStore store(corpus_dir);
    auto added = ingest(dir, dir / "labels.tsv", store);
    REQUIRE(added.size() == 3);  // a, b, anim; c skipped

    int labeled = 0, excluded = 0;
    for (const auto& entry : store.entries()) {
        if (!entry.label.empty()) ++labeled;
        if (!entry.excluded.empty()) {
            ++excluded;
            CHECK(entry.label.empty());  // excluded entries carry no label
        }
    }
    CHECK(labeled == 1);
    CHECK(excluded == 1);

    auto again = ingest(dir, std::nullopt, store);
    CHECK(again.empty());
    CHECK(store.entries().size() == 3);
}
