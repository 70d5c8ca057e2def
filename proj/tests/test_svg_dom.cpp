#include <random>

#include "doctest.h"
#include "svgchart/svg_dom.hpp"

using namespace svgchart::svg;

TEST_CASE("parse_svg basic tree and viewport") {
    auto doc = parse_svg(R"(<svg width="10" height="10"><rect x="1" y="2" width="3" height="4"/></svg>)");
    REQUIRE(doc.root.children.size() == 1);
    CHECK(doc.root.children[0].kind == ElementKind::Rect);
    CHECK(doc.viewport.width == 10);
    CHECK(doc.viewport.height == 10);
}

TEST_CASE("parse_svg viewBox fallback") {
    auto doc = parse_svg(R"(<svg viewBox="0 0 200 100"></svg>)");
    CHECK(doc.viewport.width == 200);
    CHECK(doc.viewport.height == 100);
}

TEST_CASE("parse_svg rejects non-svg root") {
    CHECK_THROWS_AS(parse_svg("<div>hello</div>"), NotSvg);
}

TEST_CASE("parse_svg rejects malformed xml") {
    CHECK_THROWS_AS(parse_svg("<svg><rect></svg>"), MalformedXml);
    CHECK_THROWS_AS(parse_svg("not xml at all"), MalformedXml);
}

TEST_CASE("parse_svg tolerates namespace prefix on the root") {
    auto doc = parse_svg(R"(<svg:svg xmlns:svg="x" width="5" height="5"><svg:circle r="1"/></svg:svg>)");
    CHECK(doc.root.children[0].kind == ElementKind::Circle);
}

TEST_CASE("parse_svg collects style blocks in document order") {
    auto doc = parse_svg(R"(<svg width="1" height="1"><style>.a{fill:red}</style><g><style>.b{fill:blue}</style></g></svg>)");
    CHECK(doc.stylesheet_text.find(".a{fill:red}") != std::string::npos);
    CHECK(doc.stylesheet_text.find(".b{fill:blue}") != std::string::npos);
    CHECK(doc.stylesheet_text.find(".a") < doc.stylesheet_text.find(".b"));
}

TEST_CASE("viewport_of resolution order") {
    SUBCASE("numeric attributes") {
        auto vp = viewport_of(parse_svg(R"(<svg width="300" height="150"/>)").root);
        CHECK(vp.width == 300);
        CHECK(vp.height == 150);
    }
    SUBCASE("px unit passes") {
        auto vp = viewport_of(parse_svg(R"(<svg width="300px" height="150px"/>)").root);
        CHECK(vp.width == 300);
    }
    SUBCASE("percent falls through to viewBox") {
        auto vp = viewport_of(parse_svg(R"(<svg width="100%" height="100%" viewBox="0 0 640 480"/>)").root);
        CHECK(vp.width == 640);
        CHECK(vp.height == 480);
    }
    SUBCASE("bounding box fallback") {
        auto vp = viewport_of(parse_svg(R"(<svg><rect x="0" y="0" width="50" height="20"/></svg>)").root);
        CHECK(vp.width == 50);
        CHECK(vp.height == 20);
    }
    SUBCASE("sentinel when nothing is known") {
        auto vp = viewport_of(parse_svg("<svg/>").root);
        CHECK(vp.width == 1);
        CHECK(vp.height == 1);
    }
    SUBCASE("diagonal consistent") {
        auto vp = viewport_of(parse_svg(R"(<svg width="3" height="4"/>)").root);
        CHECK(vp.diagonal == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("flatten_elements transform accumulation") {
    auto doc = parse_svg(R"x(<svg><g transform="translate(5,0)"><circle cx="1" cy="1" r="1"/></g></svg>)x");
    auto els = flatten_elements(doc);
    REQUIRE(els.size() == 1);
    CHECK(els[0].transform.e == doctest::Approx(5.0));
    CHECK(els[0].transform.f == doctest::Approx(0.0));
}

TEST_CASE("flatten_elements skips defs") {
    auto doc = parse_svg(R"(<svg><defs><rect width="1" height="1"/></defs></svg>)");
    CHECK(flatten_elements(doc).empty());
}

TEST_CASE("nested translates compose") {
    auto doc = parse_svg(
        R"x(<svg><g transform="translate(1,0)"><g transform="translate(0,2)"><rect/></g></g></svg>)x");
    auto els = flatten_elements(doc);
    REQUIRE(els.size() == 1);
    CHECK(els[0].transform.e == doctest::Approx(1.0));
    CHECK(els[0].transform.f == doctest::Approx(2.0));
}

TEST_CASE("malformed transform counts a warning and acts as identity") {
    auto doc = parse_svg(R"(<svg><g transform="translate(bogus"><rect/></g></svg>)");
    auto els = flatten_elements(doc);
    REQUIRE(els.size() == 1);
    CHECK(els[0].transform.near(AffineTransform{}));
    CHECK(doc.transform_warnings == 1);
}

TEST_CASE("inner svg acts as a group") {
    auto doc = parse_svg(R"(<svg width="10" height="10"><svg><rect/></svg></svg>)");
    auto els = flatten_elements(doc);
    CHECK(els.size() == 1);
}

TEST_CASE("parse_transform forms") {
    CHECK(parse_transform("translate(3)")->e == doctest::Approx(3));
    CHECK(parse_transform("scale(2)")->d == doctest::Approx(2));
    CHECK(parse_transform("scale(2,3)")->d == doctest::Approx(3));
    auto m = parse_transform("matrix(1,2,3,4,5,6)");
    CHECK(m->b == doctest::Approx(2));
    CHECK(m->f == doctest::Approx(6));
    auto r = parse_transform("rotate(90)");
    auto [x, y] = r->apply(1, 0);
    CHECK(x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(y == doctest::Approx(1.0));
    CHECK(!parse_transform("translate(1"));
    CHECK(!parse_transform("frobnicate(1)"));
}

TEST_CASE("transform composition property over random chains") {
    // accumulated child transform == parent accumulated ∘ child local
    std::mt19937_64 rng(42);
    auto rnd = [&] { return std::uniform_real_distribution<double>(-3, 3)(rng); };
    for (int iter = 0; iter < 50; ++iter) {
        AffineTransform parent{rnd(), rnd(), rnd(), rnd(), rnd(), rnd()};
        AffineTransform child{rnd(), rnd(), rnd(), rnd(), rnd(), rnd()};
        AffineTransform combined = parent.compose(child);
        double px = rnd(), py = rnd();
        auto [cx, cy] = child.apply(px, py);
        auto [ex, ey] = parent.apply(cx, cy);
        auto [gx, gy] = combined.apply(px, py);
        CHECK(gx == doctest::Approx(ex).epsilon(1e-9));
        CHECK(gy == doctest::Approx(ey).epsilon(1e-9));
    }
}

TEST_CASE("flatten count matches independent tag scan") {
    std::string text = R"(<svg width="9" height="9">
      <g><circle r="1"/><rect/><line/></g>
      <defs><circle r="2"/></defs>
      <path d="M0 0"/><text x="1" y="1">z</text><ellipse/>
    </svg>)";
    auto els = flatten_elements(parse_svg(text));
    CHECK(els.size() == 5);  // circle, rect, line, path, text; defs circle and ellipse excluded
}

TEST_CASE("split_classes") {
    auto c = split_classes("  a  b\tc ");
    REQUIRE(c.size() == 3);
    CHECK(c[0] == "a");
    CHECK(c[2] == "c");
}
