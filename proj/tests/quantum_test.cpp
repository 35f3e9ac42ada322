#include "entrolab/quantum.hpp"

#include <gtest/gtest.h>

namespace entrolab {
namespace {

TEST(Validation, StatesAndPovms) {
    // {1/2, 1/2} is a valid POVM
    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    EXPECT_NO_THROW(validate_povm({half, half}));

    // projective computational basis
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    EXPECT_NO_THROW(validate_povm({p0, p1}));

    // {|0><0|, |0><0|} does not resolve the identity
    try {
        validate_povm({p0, p0});
        FAIL() << "expected NotResolutionOfIdentity";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NotResolutionOfIdentity");
    }

    try {
        validate_state(Matrix(2.0 * Matrix::Identity(2, 2)), DimSignature::single("A", 2));
        FAIL() << "expected TraceNotOne";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "TraceNotOne");
    }

    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    try {
        validate_state(neg, DimSignature::single("A", 2));
        FAIL() << "expected NotPSD";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NotPSD");
    }
}

TEST(Purify, SpectralExamples) {
    // maximally mixed qubit purifies to a Bell-type state
    const DensityOperator mixed =
        validate_state(Matrix(0.5 * Matrix::Identity(2, 2)), DimSignature::single("A", 2));
    const DensityOperator pure = purify(mixed);
    EXPECT_EQ(pure.dims.total(), 4);
    EXPECT_TRUE(is_pure(pure));
    EXPECT_LE(max_abs(partial_trace(pure.matrix, pure.dims, {"A"}) - mixed.matrix), 1e-12);

    // pure input keeps a one-dimensional purifier
    Vector psi(2);
    psi << 1.0, 0.0;
    const DensityOperator input = pure_state(psi, DimSignature::single("A", 2));
    EXPECT_EQ(purify(input).dims.total(), 2);

    // diag(3/4, 1/4) -> sqrt(3/4)|00> + sqrt(1/4)|11>
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.75;
    diag(1, 1) = 0.25;
    const DensityOperator out =
        purify(validate_state(diag, DimSignature::single("A", 2)));
    // ascending eigenvalue order puts sqrt(3/4)|0>_A|1>_D and sqrt(1/4)|1>_A|0>_D
    Vector expected = Vector::Zero(4);
    expected(1) = std::sqrt(0.75);
    expected(2) = std::sqrt(0.25);
    EXPECT_LE(max_abs(out.matrix - Matrix(expected * expected.adjoint())), 1e-12);
}

TEST(Purify, RoundTripOnRandomStates) {
    Rng rng(0x9f1);
    for (int trial = 0; trial < 500; ++trial) {
        const Index da = 2 + static_cast<Index>(rng.below(2));
        const Index db = 2 + static_cast<Index>(rng.below(2));
        const Index rank = 1 + static_cast<Index>(rng.below(3));
        const DensityOperator rho =
            random_state(DimSignature{{"A", da}, {"B", db}}, rank, rng);
        const DensityOperator pure = purify(rho);
        EXPECT_TRUE(is_pure(pure, 1e-9));
        EXPECT_LE(max_abs(partial_trace(pure.matrix, pure.dims, {"A", "B"}) - rho.matrix),
                  1e-9);
        EXPECT_LE(pure.dims.dim(2), rank);
    }
}

TEST(MeasurementChannel, Examples) {
    // computational measurement of |+> is a fair coin
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const DensityOperator rho_plus = pure_state(plus, DimSignature::single("A", 2));
    const Povm comp = projective_povm(Matrix::Identity(2, 2));
    const DensityOperator measured = measurement_channel(comp, rho_plus, "A");
    EXPECT_LE(max_abs(measured.matrix - Matrix(0.5 * Matrix::Identity(2, 2))), 1e-12);

    // one-outcome POVM gives |0><0| (x) rho_rest
    const DensityOperator bell = maximally_entangled(2);
    const Povm trivial{{Matrix::Identity(2, 2)}, "A"};
    const DensityOperator one = measurement_channel(trivial, bell, "A");
    EXPECT_EQ(one.dims.dim(0), 1);
    EXPECT_LE(max_abs(one.matrix - Matrix(0.5 * Matrix::Identity(2, 2))), 1e-12);

    // computational measurement on half a Bell pair leaves perfect classical
    // correlation
    const DensityOperator corr = measurement_channel(comp, bell, "A");
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    EXPECT_LE(max_abs(corr.matrix - expected), 1e-12);
    EXPECT_NEAR(corr.matrix.trace().real(), 1.0, 1e-12);
}

TEST(MeasurementChannel, MarginalProbabilities) {
    Rng rng(0x31337);
    for (int trial = 0; trial < 100; ++trial) {
        const Index da = 2 + static_cast<Index>(rng.below(2));
        const DensityOperator rho = random_state(
            DimSignature{{"A", da}, {"B", 2}}, 1 + static_cast<Index>(rng.below(3)), rng);
        const Povm x = random_povm(da, 3, rng);
        const DensityOperator measured = measurement_channel(x, rho, "A");
        EXPECT_NEAR(measured.matrix.trace().real(), 1.0, 1e-10);
        const Matrix rho_a = partial_trace(rho.matrix, rho.dims, {"A"});
        const Matrix reg =
            partial_trace(measured.matrix, measured.dims, {measured.dims.label(0)});
        for (std::size_t j = 0; j < x.outcomes(); ++j) {
            const double expected = Matrix(x.elements[j] * rho_a).trace().real();
            EXPECT_NEAR(reg(static_cast<Index>(j), static_cast<Index>(j)).real(), expected,
                        1e-10);
        }
    }
}

TEST(MeasurementIsometry, Examples) {
    // {1} gives V = |0>|0> (x) 1
    const Povm trivial{{Matrix::Identity(2, 2)}, "A"};
    const Isometry v = measurement_isometry(trivial);
    EXPECT_EQ(v.matrix.rows(), 2);
    EXPECT_LE(max_abs(Matrix(v.matrix.adjoint() * v.matrix) - Matrix::Identity(2, 2)), 1e-12);

    // {1/2, 1/2}: V^dag V = 1 numerically
    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    const Isometry coin = measurement_isometry(Povm{{half, half}, "A"});
    EXPECT_LE(max_abs(Matrix(coin.matrix.adjoint() * coin.matrix) - Matrix::Identity(2, 2)),
              1e-12);
}

TEST(MeasurementIsometry, ReproducesMeasurementChannel) {
    Rng rng(0xabc);
    for (int trial = 0; trial < 100; ++trial) {
        const Index da = 2 + static_cast<Index>(rng.below(2));
        const Index db = 2 + static_cast<Index>(rng.below(2));
        const Index outcomes = 2 + static_cast<Index>(rng.below(2));
        const DensityOperator rho = random_state(
            DimSignature{{"A", da}, {"B", db}}, 1 + static_cast<Index>(rng.below(2)), rng);
        const Povm x = random_povm(da, outcomes, rng);

        const Isometry v = measurement_isometry(x);
        EXPECT_LE(max_abs(Matrix(v.matrix.adjoint() * v.matrix) - Matrix::Identity(da, da)),
                  1e-10);

        // (V_X (x) 1_B) rho (V_X (x) 1_B)^dag, then trace out X' and A
        const Matrix lifted = tensor(v.matrix, Matrix::Identity(db, db));
        const DimSignature big{{"X", outcomes}, {"X'", outcomes}, {"A", da}, {"B", db}};
        const Matrix rotated = lifted * rho.matrix * lifted.adjoint();
        const Matrix direct = partial_trace(rotated, big, {"X", "B"});
        const DensityOperator via_channel = measurement_channel(x, rho, "A");
        EXPECT_LE(max_abs(direct - via_channel.matrix), 1e-10);
    }
}

TEST(MubPair, OverlapsAreUniform) {
    for (Index d : {2, 3, 4, 5}) {
        const auto [x, z] = mub_pair(d);
        for (const Matrix& e : x.elements)
            for (const Matrix& f : z.elements) {
                const double overlap = Matrix(e * f).trace().real();
                EXPECT_NEAR(overlap, 1.0 / static_cast<double>(d), 1e-12);
            }
    }
    EXPECT_THROW(mub_pair(1), InvalidShape);
}

TEST(RandomSampling, DeterministicGivenSeed) {
    Rng rng1(12345);
    Rng rng2(12345);
    const DensityOperator a = random_state(DimSignature{{"A", 3}}, 2, rng1);
    const DensityOperator b = random_state(DimSignature{{"A", 3}}, 2, rng2);
    EXPECT_EQ(max_abs(a.matrix - b.matrix), 0.0);  // byte-identical draws
}

TEST(RandomSampling, StatesValidAndRankRespected) {
    Rng rng(0x7a1);
    for (int trial = 0; trial < 200; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.below(3));
        const Index rank = 1 + static_cast<Index>(rng.below(d));
        const DensityOperator rho = random_state(DimSignature::single("A", d), rank, rng);
        EXPECT_NO_THROW(validate_state(rho.matrix, rho.dims));
        const Eigensystem es = eig_hermitian(rho.matrix);
        Index support = 0;
        for (Index i = 0; i < d; ++i)
            if (es.values(i) > 1e-10) ++support;
        EXPECT_LE(support, rank);
        if (rank == 1) EXPECT_NEAR(es.values(d - 1), 1.0, 1e-10);
    }
    EXPECT_THROW(random_state(DimSignature::single("A", 2), 5, rng), InvalidShape);
}

TEST(RandomSampling, PovmsResolveIdentity) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(Rng::derive(0x90f, seed));
        const Povm povm = random_povm(2, 3, rng);
        Matrix sum = Matrix::Zero(2, 2);
        for (const Matrix& e : povm.elements) sum += e;
        EXPECT_LE(max_abs(sum - Matrix::Identity(2, 2)), 1e-10);
        EXPECT_NO_THROW(validate_povm(povm.elements, povm.subsystem));
    }
}

TEST(RandomSampling, ChannelsPreserveTrace) {
    Rng rng(0xc4a);
    for (int trial = 0; trial < 200; ++trial) {
        const Index d_in = 2 + static_cast<Index>(rng.below(3));
        const Index d_out = 2 + static_cast<Index>(rng.below(3));
        const Channel e = random_channel(d_in, d_out, 2, rng);
        EXPECT_NO_THROW(validate_channel(e.kraus));
        const DensityOperator rho = random_state(DimSignature::single("A", d_in),
                                                 1 + static_cast<Index>(rng.below(d_in)), rng);
        EXPECT_NEAR(apply_channel(e, rho.matrix).trace().real(), 1.0, 1e-10);
    }
    EXPECT_THROW(random_channel(4, 1, 2, rng), InvalidShape);
}

TEST(RandomSampling, IsometriesAreIsometric) {
    Rng rng(0x150);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d_in = 2 + static_cast<Index>(rng.below(3));
        const Index d_out = d_in + static_cast<Index>(rng.below(3));
        const Isometry v = random_isometry(d_in, d_out, rng);
        EXPECT_NO_THROW(validate_isometry(v.matrix));
    }
    EXPECT_THROW(random_isometry(3, 2, rng), InvalidShape);
}

}  // namespace
}  // namespace entrolab
