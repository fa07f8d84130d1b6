#include <ramcat/cache.hpp>
#include <ramcat/generators.hpp>
#include <ramcat/matrix.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ramcat;
namespace fs = std::filesystem;

namespace {

class CacheTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path()
            / ("ramcat_cache_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    auto read(const fs::path& p) -> std::string
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path dir;
    std::ostringstream warnings;
    FiniteCategory lo6 = generate({Family::lo, 6});
    ArrowQuery holds{1, 2, 5, 2, 1, ColoringMode::morphism};
    ArrowQuery fails{1, 2, 4, 2, 1, ColoringMode::morphism};

    auto key(const ArrowQuery& q) -> std::string
    {
        return arrow_cache_key(category_digest(lo6), Orientation::direct, q, default_node_budget);
    }
};

} // namespace

TEST(CacheJson, VerdictRoundTrip)
{
    auto cat = generate({Family::lo, 5});
    auto v = check_arrow(cat, ArrowQuery{1, 2, 4, 2, 1, ColoringMode::morphism});
    ASSERT_TRUE(v.witness);
    auto back = Json::parse(Json(v).dump()).get<ArrowVerdict>();
    EXPECT_EQ(back.status, v.status);
    EXPECT_EQ(back.nodes, v.nodes);
    ASSERT_TRUE(back.witness);
    EXPECT_EQ(back.witness->colors, v.witness->colors);
    EXPECT_EQ(back.witness->domain, v.witness->domain);
    EXPECT_EQ(Json(back).dump(), Json(v).dump());
}

TEST(CacheJson, KeysSeparateQueries)
{
    auto d = category_digest(generate({Family::lo, 4}));
    ArrowQuery q{0, 1, 2, 2, 1, ColoringMode::morphism};
    auto base = arrow_cache_key(d, Orientation::direct, q, 100);
    EXPECT_EQ(base, arrow_cache_key(d, Orientation::direct, q, 100));
    EXPECT_NE(base, arrow_cache_key(d, Orientation::reversed, q, 100));
    EXPECT_NE(base, arrow_cache_key(d, Orientation::direct, q, 101));
    auto q2 = q;
    q2.t = 2;
    EXPECT_NE(base, arrow_cache_key(d, Orientation::direct, q2, 100));
    EXPECT_NE(base, arrow_cache_key(category_digest(generate({Family::lo, 5})), Orientation::direct, q, 100));
    EXPECT_EQ(base.size(), 64u);
}

TEST_F(CacheTest, StoresAndSurvivesRestart)
{
    auto cold = check_arrow(lo6, holds);
    {
        ResultCache cache(dir, 0.0, &warnings);
        ArrowEngine engine(lo6);
        attach_cache(engine, cache);
        auto v = engine.check(holds);
        EXPECT_EQ(v.status, cold.status);
        EXPECT_EQ(cache.stats().writes, 1u);
        EXPECT_EQ(cache.stats().misses, 1u);
        (void)engine.check(holds);
        EXPECT_EQ(cache.stats().hits, 1u);
    }
    ASSERT_TRUE(fs::exists(dir / (key(holds) + ".json")));
    auto text = read(dir / (key(holds) + ".json"));
    EXPECT_EQ(text.rfind("ramcat-cache 1 ", 0), 0u);

    ResultCache reopened(dir, 0.0, &warnings);
    ArrowEngine engine(lo6);
    attach_cache(engine, reopened);
    auto v = engine.check(holds);
    EXPECT_EQ(v.status, cold.status);
    EXPECT_EQ(v.nodes, cold.nodes);
    EXPECT_EQ(reopened.stats().hits, 1u);
    EXPECT_EQ(reopened.stats().writes, 0u);
    EXPECT_TRUE(warnings.str().empty());
}

TEST_F(CacheTest, FailingVerdictIsReplayedOnRead)
{
    ResultCache cache(dir, 0.0, &warnings);
    ArrowEngine engine(lo6);
    attach_cache(engine, cache);
    auto first = engine.check(fails);
    auto second = engine.check(fails);
    ASSERT_TRUE(second.fails());
    EXPECT_EQ(second.witness->colors, first.witness->colors);
    EXPECT_EQ(cache.stats().hits, 1u);
    EXPECT_EQ(cache.stats().evictions, 0u);
}

TEST_F(CacheTest, CorruptEntryIsEvicted)
{
    ResultCache cache(dir, 0.0, &warnings);
    ArrowEngine engine(lo6);
    attach_cache(engine, cache);
    auto truth = engine.check(fails);
    auto path = cache.path_for(key(fails));
    auto text = read(path);
    text[text.size() / 2] ^= 1;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;

    auto v = engine.check(fails);
    EXPECT_EQ(v.status, truth.status);
    EXPECT_EQ(cache.stats().evictions, 1u);
    EXPECT_NE(warnings.str().find("checksum mismatch"), std::string::npos);
    // rewritten with a valid checksum
    EXPECT_TRUE(cache.get(key(fails)).has_value());
}

TEST_F(CacheTest, UnreplayableWitnessIsEvicted)
{
    // A well-formed entry claiming that a holding relation fails, with a made-up witness.
    ResultCache cache(dir, 0.0, &warnings);
    auto truth = check_arrow(lo6, holds);
    auto bogus = check_arrow(generate({Family::lo, 6}), ArrowQuery{1, 2, 4, 2, 1, ColoringMode::morphism});
    ASSERT_TRUE(bogus.witness);
    // pad the coloring to the size of hom(2, 6) with zeros
    auto chi = *bogus.witness;
    chi.domain.clear();
    for (auto f : lo6.hom(1, 5))
        chi.domain.push_back(f);
    chi.colors.assign(chi.domain.size(), 0);
    bogus.witness = chi;
    cache.put(key(holds), Json(bogus).dump());

    ArrowEngine engine(lo6);
    attach_cache(engine, cache);
    auto v = engine.check(holds);
    EXPECT_EQ(v.status, truth.status);
    EXPECT_EQ(cache.stats().evictions, 1u);
    EXPECT_NE(warnings.str().find("witness does not replay"), std::string::npos);
    auto stored = Json::parse(*cache.get(key(holds))).get<ArrowVerdict>();
    EXPECT_TRUE(stored.holds());
}

TEST_F(CacheTest, SampledHoldingVerdictIsRecomputed)
{
    ResultCache cache(dir, 1.0, &warnings);
    EXPECT_TRUE(cache.sampled(key(fails)));
    ArrowVerdict poison;
    poison.status = ArrowStatus::holds;
    poison.nodes = 1;
    cache.put(key(fails), Json(poison).dump());

    ArrowEngine engine(lo6);
    attach_cache(engine, cache);
    auto v = engine.check(fails);
    EXPECT_TRUE(v.fails());
    EXPECT_EQ(cache.stats().replays, 1u);
    EXPECT_EQ(cache.stats().evictions, 1u);
    EXPECT_NE(warnings.str().find("recomputed verdict differs"), std::string::npos);
}

TEST_F(CacheTest, SamplingIsDeterministic)
{
    ResultCache none(dir, 0.0, &warnings);
    ResultCache half(dir, 0.5, &warnings);
    EXPECT_FALSE(none.sampled("ffff"));
    EXPECT_TRUE(half.sampled("0000abcd"));
    EXPECT_FALSE(half.sampled("ffffabcd"));
    EXPECT_EQ(half.sampled(key(holds)), half.sampled(key(holds)));
}

TEST_F(CacheTest, InconclusiveEntryIsDropped)
{
    ResultCache cache(dir, 0.0, &warnings);
    ArrowVerdict unknown;
    cache.put(key(holds), Json(unknown).dump());
    ArrowEngine engine(lo6);
    attach_cache(engine, cache);
    EXPECT_TRUE(engine.check(holds).holds());
    EXPECT_EQ(cache.stats().evictions, 1u);

    SearchOptions tiny;
    tiny.node_budget = 3;
    ArrowEngine starved(lo6, Orientation::direct, tiny);
    ResultCache other(dir / "other", 0.0, &warnings);
    attach_cache(starved, other);
    EXPECT_FALSE(starved.check(holds).conclusive());
    EXPECT_EQ(other.stats().writes, 0u);
}

TEST_F(CacheTest, WarmMatrixMatchesCold)
{
    auto config = default_matrix_config();
    auto cold = run_matrix(config).dump();
    ResultCache cache(dir, 0.05, &warnings);
    MatrixOptions opts;
    opts.cache = &cache;
    auto first = run_matrix(config, opts);
    auto writes = cache.stats().writes;
    EXPECT_GT(writes, 0u);
    auto second = run_matrix(config, opts);
    EXPECT_EQ(first.dump(), cold);
    EXPECT_EQ(second.dump(), cold);
    EXPECT_GT(cache.stats().hits, 0u);
    EXPECT_EQ(cache.stats().evictions, 0u);
}

TEST_F(CacheTest, FromEnvironment)
{
    ::unsetenv(cache_dir_env);
    EXPECT_FALSE(ResultCache::from_env());
    ::setenv(cache_dir_env, dir.c_str(), 1);
    auto c = ResultCache::from_env();
    ASSERT_TRUE(c);
    EXPECT_EQ(c->directory(), dir);
    ::unsetenv(cache_dir_env);
}
