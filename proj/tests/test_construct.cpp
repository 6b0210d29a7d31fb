#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "repshift/construct.hpp"
#include "repshift/png_io.hpp"
#include "repshift/wasserstein.hpp"
#include "support/fixtures.hpp"

using namespace repshift;
namespace fs = std::filesystem;

namespace {

struct Fixture {
    fs::path root;
    DatasetHandle src;
    DatasetHandle tgt;
    FilterBank bank;

    Fixture() : bank(build_filter_bank(0)) {
        root = fs::temp_directory_path() / "repshift_construct";
        fs::remove_all(root);
        src = test::write_scene_dataset(root / "src", 4, 100, 48, 36).images;
        tgt = test::write_scene_dataset(root / "tgt", 4, 200, 48, 36).images;
    }

    double shift_of(const DatasetHandle& candidate) const {
        return representation_shift(dataset_channel_means(bank, candidate),
                                    dataset_channel_means(bank, src))
            .representation_shift;
    }
};

}  // namespace

TEST_CASE("identity op in a matching interval is accepted first") {
    const Fixture fx;
    const double baseline = fx.shift_of(fx.tgt);

    const std::vector<AugmentationOp> ops = {parse_op_spec("color:strength=0")};
    const ShiftInterval interval{baseline, 0.05 * baseline + 1e-6};
    const ConstructionReport report =
        construct_dataset(interval, fx.src, fx.tgt, ops, fx.bank, fx.root / "out");

    REQUIRE(report.attempts.size() == 1);
    CHECK(report.attempts[0].accepted);
    CHECK(report.selected == op_descriptor(ops[0]));
    CHECK(report.output_root == (fx.root / "out").string());
    CHECK(report.attempts[0].measured_shift == doctest::Approx(baseline).epsilon(1e-9));

    // accepted candidate persists
    CHECK(load_dataset(fx.root / "out", DatasetKind::images).size() == fx.tgt.size());
}

TEST_CASE("impossible interval rejects everything and cleans up") {
    const Fixture fx;
    const std::vector<AugmentationOp> ops = {parse_op_spec("color:strength=0"),
                                             parse_op_spec("poster:levels=2")};
    const ConstructionReport report =
        construct_dataset({-1.0, 0.25}, fx.src, fx.tgt, ops, fx.bank, fx.root / "none");

    CHECK(report.attempts.size() == 2);
    CHECK(!report.selected.has_value());
    CHECK(!report.output_root.has_value());
    for (const auto& a : report.attempts) CHECK(!a.accepted);
    // rejected candidate files removed
    CHECK(!fs::exists(fx.root / "none" / (fx.tgt.entries[0] + ".png")));

    SUBCASE("return-last keeps the final candidate") {
        ConstructOptions options;
        options.return_last = true;
        const ConstructionReport last =
            construct_dataset({-1.0, 0.25}, fx.src, fx.tgt, ops, fx.bank, fx.root / "last", options);
        CHECK(!last.selected.has_value());
        CHECK(last.returned_last);
        CHECK(last.output_root == (fx.root / "last").string());
        CHECK(load_dataset(fx.root / "last", DatasetKind::images).size() == fx.tgt.size());
    }
}

TEST_CASE("first in-interval op wins, earlier attempts are logged") {
    const Fixture fx;
    // measure both candidate shifts up front to build the interval around
    // the second op only
    const auto op1 = parse_op_spec("poster:levels=2");
    const auto op2 = parse_op_spec("color:strength=0");
    const double r1 = fx.shift_of(
        apply_to_dataset(op1, fx.tgt, nullptr, fx.root / "probe1", 0, 1));
    const double r2 = fx.shift_of(
        apply_to_dataset(op2, fx.tgt, nullptr, fx.root / "probe2", 0, 1));
    REQUIRE(r1 != r2);

    const double delta = std::abs(r1 - r2) / 4.0;
    const ShiftInterval interval{r2, delta};
    REQUIRE(interval.contains(r2));
    REQUIRE(!interval.contains(r1));

    const ConstructionReport report =
        construct_dataset(interval, fx.src, fx.tgt, {op1, op2}, fx.bank, fx.root / "pick");
    REQUIRE(report.attempts.size() == 2);
    CHECK(!report.attempts[0].accepted);
    CHECK(report.attempts[1].accepted);
    CHECK(report.selected == op_descriptor(op2));
    CHECK(report.attempts[0].measured_shift == doctest::Approx(r1).epsilon(1e-9));
    CHECK(report.attempts[1].measured_shift == doctest::Approx(r2).epsilon(1e-9));
}

TEST_CASE("first-match semantics against an evaluate-everything oracle") {
    const Fixture fx;
    const std::vector<AugmentationOp> ops = {
        parse_op_spec("poster:levels=2"),
        parse_op_spec("frosted:radius=4"),
        parse_op_spec("color:strength=0"),
    };
    // oracle: shift of every op, evaluated independently
    std::vector<double> shifts;
    for (std::size_t i = 0; i < ops.size(); ++i)
        shifts.push_back(fx.shift_of(apply_to_dataset(
            ops[i], fx.tgt, nullptr, fx.root / ("oracle" + std::to_string(i)), 0, 1)));

    const ShiftInterval interval{shifts[1], std::abs(shifts[1]) * 0.01 + 1e-9};
    std::size_t expected_first = ops.size();
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (interval.contains(shifts[i])) {
            expected_first = i;
            break;
        }
    REQUIRE(expected_first == 1);

    const ConstructionReport report =
        construct_dataset(interval, fx.src, fx.tgt, ops, fx.bank, fx.root / "oracle_pick");
    CHECK(report.attempts.size() == expected_first + 1);
    CHECK(report.selected == op_descriptor(ops[expected_first]));
}

TEST_CASE("re-running reproduces identical reports and bytes") {
    const Fixture fx;
    const std::vector<AugmentationOp> ops = {parse_op_spec("frosted:radius=3")};
    const double r = fx.shift_of(apply_to_dataset(ops[0], fx.tgt, nullptr, fx.root / "probe", 7, 1));

    ConstructOptions options;
    options.seed = 7;
    const ShiftInterval interval{r, 1e-6 + std::abs(r) * 0.01};
    const ConstructionReport a =
        construct_dataset(interval, fx.src, fx.tgt, ops, fx.bank, fx.root / "runA", options);
    options.jobs = 4;
    const ConstructionReport b =
        construct_dataset(interval, fx.src, fx.tgt, ops, fx.bank, fx.root / "runB", options);

    CHECK(a.selected == b.selected);
    REQUIRE(a.attempts.size() == b.attempts.size());
    for (std::size_t i = 0; i < a.attempts.size(); ++i)
        CHECK(a.attempts[i].measured_shift == b.attempts[i].measured_shift);
    for (const std::string& stem : fx.tgt.entries) {
        const auto pa = fx.root / "runA" / (stem + ".png");
        const auto pb = fx.root / "runB" / (stem + ".png");
        REQUIRE(fs::exists(pa));
        CHECK(read_image(pa) == read_image(pb));
    }
}

TEST_CASE("a failing op is a logged rejection, not a fatal error") {
    const Fixture fx;
    const double baseline = fx.shift_of(fx.tgt);
    const std::vector<AugmentationOp> ops = {
        parse_op_spec("frosted:radius=30"),  // larger than min(H,W)/2 for 48x36 scenes
        parse_op_spec("color:strength=0"),
    };
    const ShiftInterval interval{baseline, 0.05 * baseline + 1e-6};
    const ConstructionReport report =
        construct_dataset(interval, fx.src, fx.tgt, ops, fx.bank, fx.root / "failing");

    REQUIRE(report.attempts.size() == 2);
    CHECK(!report.attempts[0].accepted);
    CHECK(!report.attempts[0].error.empty());
    CHECK(report.attempts[1].accepted);
    CHECK(report.selected == op_descriptor(ops[1]));
}

TEST_CASE("validation") {
    const Fixture fx;
    CHECK_THROWS_AS(construct_dataset({0, 0.1}, fx.src, fx.tgt, {}, fx.bank, fx.root / "x"),
                    std::invalid_argument);
    CHECK_THROWS_AS(construct_dataset({0, 0.0}, fx.src, fx.tgt,
                                      {parse_op_spec("color:strength=0")}, fx.bank, fx.root / "x"),
                    std::invalid_argument);
}
