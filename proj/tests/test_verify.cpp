#include <doctest.h>

#include <random>

#include "qpart/partition.hpp"
#include "qpart/qasm.hpp"
#include "qpart/verify.hpp"
#include "support/helpers.hpp"
#include "support/unitary.hpp"

using namespace qpart;
using testsupport::g;
using testsupport::make_circuit;
using testsupport::random_circuit;

TEST_CASE("a circuit is equivalent to itself") {
    auto circ = make_circuit(3, {g("h", {0}), g("cx", {0, 1}), g("rz", {2}, {"0.5"})});
    auto report = verify::equivalent(circ, circ);
    CHECK(report.equivalent);
    CHECK(report.gate_multiset_ok);
    CHECK(report.per_qubit_order_ok);
    CHECK_FALSE(report.first_divergence.has_value());
}

TEST_CASE("swapping disjoint gates keeps equivalence") {
    auto a = make_circuit(4, {g("h", {0}), g("cx", {2, 3}), g("x", {1})});
    auto b = make_circuit(4, {g("cx", {2, 3}), g("x", {1}), g("h", {0})});
    CHECK(verify::equivalent(a, b).equivalent);
    // The unitary oracle agrees.
    CHECK(testsupport::max_abs_diff(testsupport::unitary_of(a), testsupport::unitary_of(b)) <
          1e-10);
}

TEST_CASE("swapping dependent gates breaks equivalence") {
    auto a = make_circuit(2, {g("h", {0}), g("cx", {0, 1})});
    auto b = make_circuit(2, {g("cx", {0, 1}), g("h", {0})});
    auto report = verify::equivalent(a, b);
    CHECK_FALSE(report.equivalent);
    CHECK(report.gate_multiset_ok);
    CHECK_FALSE(report.per_qubit_order_ok);
    REQUIRE(report.first_divergence.has_value());
    CHECK(report.first_divergence->qubit == 0);
    CHECK(report.first_divergence->position == 0);
}

TEST_CASE("commuting gates on a shared qubit still count as different") {
    // rz on the control commutes with cx mathematically, but the criterion is
    // per-qubit order, not matrix identity.
    auto a = make_circuit(2, {g("rz", {0}, {"0.5"}), g("cx", {0, 1})});
    auto b = make_circuit(2, {g("cx", {0, 1}), g("rz", {0}, {"0.5"})});
    CHECK_FALSE(verify::equivalent(a, b).equivalent);
    // Yet the matrices do agree, which is exactly why the criterion is
    // conservative.
    CHECK(testsupport::max_abs_diff(testsupport::unitary_of(a), testsupport::unitary_of(b)) <
          1e-10);
}

TEST_CASE("a dropped gate fails the multiset check") {
    auto a = make_circuit(2, {g("h", {0}), g("cx", {0, 1})});
    auto b = make_circuit(2, {g("cx", {0, 1})});
    auto report = verify::equivalent(a, b);
    CHECK_FALSE(report.equivalent);
    CHECK_FALSE(report.gate_multiset_ok);
    REQUIRE(report.first_divergence.has_value());
    CHECK(report.first_divergence->qubit == 0);
}

TEST_CASE("a changed parameter fails the multiset check") {
    auto a = make_circuit(1, {g("rz", {0}, {"0.5"})});
    auto b = make_circuit(1, {g("rz", {0}, {"0.25"})});
    CHECK_FALSE(verify::equivalent(a, b).equivalent);
}

TEST_CASE("duplicated gate counts are caught") {
    auto a = make_circuit(2, {g("cx", {0, 1}), g("cx", {0, 1})});
    auto b = make_circuit(2, {g("cx", {0, 1})});
    CHECK_FALSE(verify::equivalent(a, b).gate_multiset_ok);
    CHECK_FALSE(verify::equivalent(b, a).gate_multiset_ok);
}

TEST_CASE("qubit count mismatch throws") {
    auto a = make_circuit(2, {g("h", {0})});
    auto b = make_circuit(3, {g("h", {0})});
    CHECK_THROWS_AS(verify::equivalent(a, b), verify::VerifyError);
}

TEST_CASE("partitioned output of the partitioner verifies") {
    auto circ = make_circuit(4, {g("cx", {0, 1}), g("cx", {1, 2}), g("cx", {2, 3}),
                                 g("cx", {0, 1})});
    auto pc = part::quick_partition(circ, 3);
    CHECK(verify::equivalent(circ, pc).equivalent);
}

TEST_CASE("text form with barriers verifies against the original") {
    auto original = ir::lower(qasm::parse("qreg q[3];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\n"));
    auto candidate = qasm::parse(
        "qreg q[3];\nh q[0];\ncx q[0],q[1];\nbarrier;\ncx q[1],q[2];\n");
    CHECK(verify::equivalent(original, candidate).equivalent);
}

TEST_CASE("text form that reorders dependent gates is rejected") {
    auto original = ir::lower(qasm::parse("qreg q[2];\nh q[0];\ncx q[0],q[1];\n"));
    auto candidate = qasm::parse("qreg q[2];\ncx q[0],q[1];\nbarrier;\nh q[0];\n");
    CHECK_FALSE(verify::equivalent(original, candidate).equivalent);
}

TEST_CASE("structural validation accepts partitioner output") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto circ = random_circuit(rng, 6, 25);
        auto pc = part::quick_partition(circ, 3);
        CHECK(verify::validate_blocks(pc, 3).equivalent);
    }
}

TEST_CASE("structural validation flags an oversized block") {
    part::PartitionedCircuit pc;
    pc.qubit_count = 4;
    pc.block_size = 2;
    pc.blocks.push_back({{0, 1, 2}, {g("cx", {0, 1}), g("cx", {1, 2})}});
    CHECK_FALSE(verify::validate_blocks(pc, 2).equivalent);
    CHECK(verify::validate_blocks(pc, 3).equivalent);
}

TEST_CASE("structural validation flags a stale qubit set") {
    part::PartitionedCircuit pc;
    pc.qubit_count = 3;
    pc.block_size = 3;
    pc.blocks.push_back({{0, 1, 2}, {g("cx", {0, 1})}});  // 2 never appears in a gate
    CHECK_FALSE(verify::validate_blocks(pc, 3).equivalent);
}

TEST_CASE("verifier agreement with the unitary oracle on random pairs") {
    // For small circuits over the modeled gate set: whenever the verifier
    // says equivalent, the unitaries must match to near machine precision.
    std::mt19937_64 rng(2024);
    int equivalents = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto circ = random_circuit(rng, 4, 12);
        auto pc = part::quick_partition(circ, 3);
        auto flat = part::flatten(pc, circ);
        auto report = verify::equivalent(circ, flat);
        CHECK(report.equivalent);
        if (report.equivalent) {
            ++equivalents;
            CHECK(testsupport::max_abs_diff(testsupport::unitary_of(circ),
                                            testsupport::unitary_of(flat)) < 1e-10);
        }
    }
    CHECK(equivalents == 60);
}
