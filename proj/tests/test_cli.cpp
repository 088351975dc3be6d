#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args)
{
    const std::string err_path = "/tmp/nilcat_cli_stderr.txt";
    const std::string cmd = std::string(NILCAT_CLI_PATH) + " " + args + " 2>" + err_path;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int rc = pclose(pipe);
    r.code = WEXITSTATUS(rc);
    std::ifstream ef(err_path);
    std::stringstream ss;
    ss << ef.rdbuf();
    r.err = ss.str();
    return r;
}

json load_schema(const std::string& name)
{
    std::ifstream f(std::string(NILCAT_SCHEMA_DIR) + "/" + name);
    REQUIRE(f.good());
    return json::parse(f);
}

// minimal structural validator: type keywords, required, properties, items
bool matches_schema(const json& doc, const json& schema)
{
    if (schema.contains("type")) {
        const std::string ty = schema["type"];
        if (ty == "object" && !doc.is_object()) return false;
        if (ty == "array" && !doc.is_array()) return false;
        if (ty == "string" && !doc.is_string()) return false;
        if (ty == "boolean" && !doc.is_boolean()) return false;
        if (ty == "number" && !doc.is_number()) return false;
        if (ty == "integer" && !doc.is_number_integer()) return false;
    }
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& v : schema["enum"]) any = any || (v == doc);
        if (!any) return false;
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!doc.contains(key.get<std::string>())) return false;
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (doc.contains(it.key()) && !matches_schema(doc[it.key()], it.value()))
                    return false;
    }
    if (doc.is_array() && schema.contains("items")) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
            return false;
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>())
            return false;
        for (const auto& el : doc)
            if (!matches_schema(el, schema["items"])) return false;
    }
    return true;
}

std::vector<std::string> split_lines(const std::string& s)
{
    std::vector<std::string> lines;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("profile: CSV header and neck row")
{
    auto r = run_cli("profile --a 1");
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() >= 2);
    REQUIRE(lines[0] == "t,f,f_t,s,gamma");
    bool found = false;
    for (const auto& line : lines)
        if (line == "0,1,0,0,0") found = true;
    REQUIRE(found);
}

TEST_CASE("profile: JSON format and schema")
{
    auto r = run_cli("profile --a 2 --format json --samples 40");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(doc.contains("a"));
    REQUIRE(doc.contains("rows"));
    REQUIRE(doc["a"] == 2.0);
    REQUIRE(matches_schema(doc, load_schema("profile.schema.json")));

    // middle row is the neck
    const auto& rows = doc["rows"];
    const auto& mid = rows[rows.size() / 2];
    REQUIRE(mid[0] == 0.0);
    REQUIRE(mid[1] == 2.0);
    REQUIRE(mid[2] == 0.0);
}

TEST_CASE("profile: invalid neck radius exits 2 naming the constraint")
{
    auto r = run_cli("profile --a -1");
    REQUIRE(r.code == 2);
    REQUIRE(r.err.find("a must be > 0") != std::string::npos);
}

TEST_CASE("unknown flags are usage errors")
{
    REQUIRE(run_cli("profile --bogus 3").code == 2);
    REQUIRE(run_cli("frobnicate").code == 2);
}

TEST_CASE("stability: keys, key order, fixed point at z")
{
    auto r = run_cli("stability --a 1");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(matches_schema(doc, load_schema("stability.schema.json")));

    // documented key order: z, t1, t2, classification
    const auto pz = r.out.find("\"z\"");
    const auto p1 = r.out.find("\"t1\"");
    const auto p2 = r.out.find("\"t2\"");
    const auto pc = r.out.find("\"classification\"");
    REQUIRE(pz < p1);
    REQUIRE(p1 < p2);
    REQUIRE(p2 < pc);

    const double z = doc["z"];
    REQUIRE(doc["classification"] == "stable-unstable");
    REQUIRE(std::fabs(doc["t1"].get<double>() - z) < 1e-12);
    REQUIRE(std::fabs(doc["t2"].get<double>() - z) < 1e-6);

    char arg[128];
    std::snprintf(arg, sizeof arg, "stability --a 1 --t1 %.12g", z);
    auto r2 = run_cli(arg);
    REQUIRE(r2.code == 0);
    json doc2 = json::parse(r2.out);
    REQUIRE(std::fabs(doc2["t2"].get<double>() - z) < 1e-6);
}

TEST_CASE("index: forced bracket at a = 1 and schema")
{
    auto r = run_cli("index --a 1");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(matches_schema(doc, load_schema("index.schema.json")));
    REQUIRE(doc["computed"] == 3);
    REQUIRE(doc["lower"] == 3);
    REQUIRE(doc["upper"] == 3);
}

TEST_CASE("omega: values in range and schema")
{
    auto r = run_cli("omega --a 1");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(matches_schema(doc, load_schema("omega.schema.json")));
    REQUIRE(doc["omega_limit"].get<double>() > M_PI_2);
    REQUIRE(doc["omega_limit"].get<double>() < M_PI);
    REQUIRE(doc["strip_halfwidth"].get<double>() > 0.0);
    REQUIRE(doc["strip_halfwidth"].get<double>() < 1.0);
}

TEST_CASE("highdim: schema, ordering, Lindeloef failure")
{
    auto r = run_cli("highdim --n 2 --a 1");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(matches_schema(doc, load_schema("highdim.schema.json")));
    REQUIRE(doc["lindelof"] == false);
    const double T = doc["T"], z = doc["z"], ell = doc["ell"];
    REQUIRE(0.0 < ell);
    REQUIRE(ell < z);
    REQUIRE(z < T);

    REQUIRE(run_cli("highdim --n 1 --a 1").code == 2);
}

TEST_CASE("index: widened detection band reports an interval")
{
    auto r = run_cli("index --a 5 --zero-eps 0.7");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    REQUIRE(matches_schema(doc, load_schema("index.schema.json")));
    REQUIRE(doc["indeterminate"] == true);
    REQUIRE(doc.contains("computed_interval"));
    REQUIRE(doc["computed_interval"][0].get<int>() < doc["computed_interval"][1].get<int>());
}

TEST_CASE("sweeps emit ascending-a arrays")
{
    auto r = run_cli("omega --a-grid 2,0.5,1");
    REQUIRE(r.code == 0);
    json arr = json::parse(r.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 3);
    REQUIRE(arr[0]["a"] == 0.5);
    REQUIRE(arr[1]["a"] == 1.0);
    REQUIRE(arr[2]["a"] == 2.0);
    for (const auto& item : arr)
        REQUIRE(item["omega_limit"].get<double>() > M_PI_2);
}

TEST_CASE("identical configuration yields byte-identical output")
{
    auto r1 = run_cli("index --a 1.5");
    auto r2 = run_cli("index --a 1.5");
    REQUIRE(r1.code == 0);
    REQUIRE(r1.out == r2.out);

    auto p1 = run_cli("profile --a 0.7 --samples 100");
    auto p2 = run_cli("profile --a 0.7 --samples 100");
    REQUIRE(p1.out == p2.out);
}

TEST_CASE("svg emission")
{
    const std::string path = "/tmp/nilcat_test_curve.svg";
    std::remove(path.c_str());
    auto r = run_cli("profile --a 1 --samples 50 --svg " + path);
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string svg = ss.str();
    REQUIRE(svg.find("<svg") != std::string::npos);
    REQUIRE(svg.find("polyline") != std::string::npos);
    REQUIRE(svg.find("z(a)") != std::string::npos);
}

TEST_CASE("check battery passes and exits 0")
{
    auto r = run_cli("check");
    INFO(r.out);
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("[FAIL]") == std::string::npos);
    REQUIRE(r.out.find("[PASS]") != std::string::npos);
}
