#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <hdcp/error.hpp>
#include <hdcp/segment.hpp>

#include "cli.hpp"
#include "csv.hpp"

namespace fs = std::filesystem;
using hdcp::cli::run;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hdcp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) const {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    // T x d panel with a mean shift of `shift` in every column after row T/2.
    fs::path panel(const std::string& name, std::size_t T, std::size_t d, double shift, unsigned seed) const {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> z;
        std::ostringstream s;
        for (std::size_t j = 0; j < d; ++j) s << (j ? "," : "") << "x" << j;
        s << '\n';
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t j = 0; j < d; ++j) s << (j ? "," : "") << z(gen) + (t >= T / 2 ? shift : 0.0);
            s << '\n';
        }
        return write(name, s.str());
    }

    int call(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }

    std::map<std::string, std::string> keys() const {
        std::map<std::string, std::string> m;
        std::istringstream in(out_.str());
        for (std::string line; std::getline(in, line);) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
        }
        return m;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

const std::vector<std::string> kFastNull{"--reps", "2000", "--grid", "200"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_F(CliTest, TestExitCodes) {
    const auto change = panel("change.csv", 100, 4, 1.0, 1);
    const auto null = panel("null.csv", 100, 4, 0.0, 2);
    EXPECT_EQ(call(concat({"test", "-i", change.string()}, kFastNull)), hdcp::cli::kExitReject);
    auto k = keys();
    EXPECT_EQ(k["reject"], "true");
    EXPECT_EQ(k["changepoint_index"], "50");
    EXPECT_EQ(call(concat({"test", "-i", null.string()}, kFastNull)), hdcp::cli::kExitAccept);
    EXPECT_EQ(keys()["reject"], "false");
    EXPECT_EQ(call(concat({"test", "-i", change.string(), "--method", "panel"}, kFastNull)),
              hdcp::cli::kExitReject);
    const auto wrong = write("p.csv", "1,2,3\n");
    EXPECT_EQ(call(concat({"test", "-i", change.string(), "--direction", wrong.string()}, kFastNull)),
              hdcp::cli::kExitError);
    EXPECT_NE(err_.str().find("DimensionMismatch"), std::string::npos);
    EXPECT_EQ(call({"test", "-i", (dir_ / "missing.csv").string()}), hdcp::cli::kExitError);
    EXPECT_EQ(call({"test", "-i", change.string(), "--alpha", "2"}), hdcp::cli::kExitError);
    EXPECT_EQ(call({}), hdcp::cli::kExitError);
}

TEST_F(CliTest, ConfigFileAndPrecedence) {
    const auto change = panel("change.csv", 100, 3, 0.5, 3);
    const auto cfg = write("run.ini", "[test]\nreps=2000\ngrid=200\nalpha=0.01\nvariance=naive\n");
    EXPECT_NE(call({"--config", cfg.string(), "test", "-i", change.string()}), hdcp::cli::kExitError) << err_.str();
    auto a = keys();
    call(concat({"test", "-i", change.string(), "--alpha", "0.01", "--variance", "naive"}, kFastNull));
    EXPECT_EQ(keys(), a);
    call({"--config", cfg.string(), "test", "-i", change.string(), "--alpha", "0.1"});
    EXPECT_NE(keys()["critical_value"], a["critical_value"]);
}

TEST_F(CliTest, TableCacheCriticalValue) {
    const auto change = panel("change.csv", 80, 2, 0.0, 4);
    const auto cache = dir_ / "tables";
    call(concat({"test", "-i", change.string(), "--table-dir", cache.string()}, kFastNull));
    const auto with_cache = keys();
    call(concat({"test", "-i", change.string()}, kFastNull));
    EXPECT_EQ(with_cache.at("critical_value"), keys().at("critical_value"));
    EXPECT_FALSE(fs::is_empty(cache));
}

TEST_F(CliTest, SegmentOutput) {
    const auto x = panel("x.csv", 120, 3, 2.0, 5);
    ASSERT_EQ(call(concat({"segment", "-i", x.string()}, kFastNull)), 0) << err_.str();
    std::istringstream in(out_.str());
    std::string header;
    std::string row;
    std::getline(in, header);
    EXPECT_EQ(header, "location,statistic,p_value,depth,order");
    ASSERT_TRUE(std::getline(in, row));
    EXPECT_TRUE(row.starts_with("60,")) << row;
}

TEST_F(CliTest, FullerMatchesPretransformed) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> prices(2, std::vector<double>{100.0});
    for (int t = 1; t < 150; ++t) {
        for (auto& p : prices) p.push_back(p.back() * std::exp((t < 75 ? 0.01 : 0.04) * z(gen)));
    }
    std::ostringstream raw;
    std::ostringstream transformed;
    raw.precision(17);
    transformed.precision(17);
    std::vector<std::vector<double>> y;
    for (auto& p : prices) y.push_back(hdcp::fuller_transform(p));
    for (std::size_t t = 0; t < 150; ++t) raw << prices[0][t] << ',' << prices[1][t] << '\n';
    for (std::size_t t = 0; t < 149; ++t) transformed << y[0][t] << ',' << y[1][t] << '\n';
    const auto a = write("raw.csv", raw.str());
    const auto b = write("y.csv", transformed.str());
    ASSERT_EQ(call(concat({"segment", "-i", a.string(), "--fuller"}, kFastNull)), 0) << err_.str();
    const std::string via_flag = out_.str();
    ASSERT_EQ(call(concat({"segment", "-i", b.string()}, kFastNull)), 0);
    EXPECT_EQ(via_flag, out_.str());
}

TEST_F(CliTest, CritvalDeterministic) {
    const auto a = dir_ / "a.csv";
    const auto b = dir_ / "b.csv";
    ASSERT_EQ(call(concat({"critval", "--law", "bridge-sup", "-o", a.string()}, kFastNull)), 0) << err_.str();
    ASSERT_EQ(call(concat({"critval", "--law", "bridge-sup", "-o", b.string()}, kFastNull)), 0);
    std::ifstream fa(a);
    std::ifstream fb(b);
    std::stringstream sa;
    std::stringstream sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NE(sa.str().find("# law=bridge-sup"), std::string::npos);
    EXPECT_EQ(call({"critval", "--law", "nonsense"}), hdcp::cli::kExitError);
}

TEST_F(CliTest, Efficiency) {
    const auto delta = write("delta.csv", "1,1\n");
    const auto sigma = write("sigma.csv", "2,1\n1,2\n");
    ASSERT_EQ(call({"efficiency", "--delta", delta.string(), "--sigma", sigma.string(), "--direction", "oracle"}), 0)
        << err_.str();
    auto k = keys();
    EXPECT_NEAR(std::stod(k["e1"]), std::sqrt(2.0 / 3.0), 1e-9);
    EXPECT_NEAR(std::stod(k["e_oracle"]), std::sqrt(2.0 / 3.0), 1e-9);
    EXPECT_NEAR(std::stod(k["cone_halfangle"]), std::acos(std::pow(2.0, -0.25)), 1e-9);
    EXPECT_EQ(k.count("e3"), 0u);

    const auto d16 = write("d16.csv", "0.5,0.5,0.5,0.5\n");
    const auto ones = write("ones.csv", "1,1,1,1\n");
    ASSERT_EQ(call({"efficiency", "--delta", d16.string(), "--s", ones.string(), "--phi", ones.string()}), 0);
    k = keys();
    EXPECT_NEAR(std::stod(k["e3"]), 0.5, 1e-9);
    EXPECT_NEAR(std::stod(k["A_d"]), 2.0, 1e-9);

    std::string sixteen;
    for (int i = 0; i < 16; ++i) sixteen += (i ? ",1" : "1");
    const auto s16 = write("s16.csv", sixteen + "\n");
    ASSERT_EQ(call({"efficiency", "--delta", s16.string(), "--s", s16.string()}), 0);
    EXPECT_NEAR(std::stod(keys()["cone_halfangle"]), std::acos(0.5), 1e-9);
    EXPECT_EQ(call({"efficiency", "--delta", delta.string()}), hdcp::cli::kExitError);
}

TEST(Csv, ReadTable) {
    std::istringstream a("a,b\n1,2\n3,4\n");
    const auto m = hdcp::cli::read_table(a);
    ASSERT_EQ(m.rows(), 2);
    EXPECT_EQ(m(1, 0), 3.0);
    std::istringstream ragged("1,2\n3\n");
    EXPECT_THROW((void)hdcp::cli::read_table(ragged), hdcp::Error);
    std::istringstream late("1,2\nx,y\n");
    EXPECT_THROW((void)hdcp::cli::read_table(late), hdcp::Error);
    std::istringstream empty("");
    EXPECT_THROW((void)hdcp::cli::read_table(empty), hdcp::Error);
}
