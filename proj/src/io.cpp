#include "varbesov/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace varbesov {

using nlohmann::json;

Grid grid_from_json(const json& j) {
    require(j.is_object(), "grid must be a JSON object");
    const int dim = j.value("dim", 1);
    require(dim == 1 || dim == 2, "grid dim must be 1 or 2");
    return Grid(dim, j.value("jmax", dim == 1 ? 3 : 2), j.value("jfine", dim == 1 ? 7 : 5));
}

json grid_to_json(const Grid& grid) {
    return {{"dim", grid.dim()}, {"jmax", grid.jmax()}, {"jfine", grid.jfine()}};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

bool is_csv(const std::string& path) { return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0; }

}  // namespace

GridFunction read_function(const std::string& path, const Grid& grid) {
    static_assert(std::endian::native == std::endian::little, "binary sample files are little-endian");
    std::vector<Complex> vals;
    vals.reserve(grid.size());
    if (is_csv(path)) {
        std::istringstream in(read_text(path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            double re = 0.0, im = 0.0;
            char comma = 0;
            std::istringstream ls(line);
            if (!(ls >> re)) throw DomainError(path + ": unreadable line '" + line + "'");
            if (ls >> comma && !(ls >> im)) throw DomainError(path + ": unreadable line '" + line + "'");
            vals.emplace_back(re, im);
        }
    } else {
        const std::string raw = read_text(path);
        require(raw.size() % (2 * sizeof(double)) == 0, path + ": binary size is not a whole number of complex samples");
        vals.resize(raw.size() / (2 * sizeof(double)));
        std::memcpy(static_cast<void*>(vals.data()), raw.data(), raw.size());
    }
    require(vals.size() == grid.size(), path + ": holds " + std::to_string(vals.size()) + " samples, grid has " +
                                            std::to_string(grid.size()));
    return GridFunction(grid, std::move(vals));
}

void write_function(const std::string& path, const GridFunction& f) {
    if (is_csv(path)) {
        std::ostringstream out;
        out.precision(17);
        for (const auto& z : f.values()) out << z.real() << ',' << z.imag() << '\n';
        write_text(path, out.str());
        return;
    }
    std::string raw(f.size() * sizeof(Complex), '\0');
    std::memcpy(raw.data(), static_cast<const void*>(f.values().data()), raw.size());
    write_text(path, raw);
}

namespace {

json patch_to_json(const LocalPatch& p) {
    json vals = json::array();
    for (const auto& z : p.values) vals.push_back({z.real(), z.imag()});
    return {{"dim", p.dim}, {"res", p.res}, {"origin", {p.origin[0], p.origin[1]}}, {"extent", p.extent},
            {"values", vals}};
}

LocalPatch patch_from_json(const json& j) {
    LocalPatch p;
    p.dim = j.at("dim").get<int>();
    p.res = j.at("res").get<int>();
    p.origin = {j.at("origin")[0].get<std::int64_t>(), j.at("origin")[1].get<std::int64_t>()};
    p.extent = j.at("extent").get<std::size_t>();
    for (const auto& z : j.at("values")) p.values.emplace_back(z[0].get<double>(), z[1].get<double>());
    const std::size_t want = p.dim == 1 ? p.extent : p.extent * p.extent;
    require(p.values.size() == want, "atom patch holds " + std::to_string(p.values.size()) + " values, expected " +
                                         std::to_string(want));
    return p;
}

}  // namespace

json atomization_to_json(const Atomization& at) {
    const Grid& grid = at.lambda.grid();
    json atoms = json::array();
    for (const auto& a : at.atoms) {
        const Complex lam = at.lambda.at(a.cube.v, a.cube.m);
        json m = json::array({a.cube.m[0]});
        if (grid.dim() == 2) m.push_back(a.cube.m[1]);
        json e{{"v", a.cube.v}, {"m", m}, {"K", a.K}, {"L", a.L}, {"gamma", a.gamma},
               {"lambda", {lam.real(), lam.imag()}}, {"coarse", patch_to_json(a.coarse)}};
        if (!a.fine.values.empty()) e["fine"] = patch_to_json(a.fine);
        atoms.push_back(std::move(e));
    }
    return {{"grid", grid_to_json(grid)}, {"v_max", at.lambda.v_max()}, {"C_theta", at.C_theta}, {"atoms", atoms}};
}

Atomization atomization_from_json(const json& j) {
    try {
        const Grid grid = grid_from_json(j.at("grid"));
        Atomization at{SequenceCoeffs(grid, j.at("v_max").get<int>()), {}, j.value("C_theta", std::vector<double>{})};
        for (const auto& e : j.at("atoms")) {
            AtomSpec a;
            a.K = e.at("K").get<int>();
            a.L = e.at("L").get<int>();
            a.gamma = e.at("gamma").get<double>();
            a.cube.v = e.at("v").get<int>();
            const auto& m = e.at("m");
            a.cube.m = {m.at(0).get<std::int64_t>(), grid.dim() == 2 ? m.at(1).get<std::int64_t>() : 0};
            check_cube(a.cube, grid);
            require(a.cube.v >= 0 && a.cube.v <= at.lambda.v_max(), "atom level outside 0..v_max");
            a.coarse = patch_from_json(e.at("coarse"));
            if (e.contains("fine")) a.fine = patch_from_json(e.at("fine"));
            at.lambda.at(a.cube.v, a.cube.m) = Complex{e.at("lambda")[0].get<double>(), e.at("lambda")[1].get<double>()};
            at.atoms.push_back(std::move(a));
        }
        return at;
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed atom JSON: ") + e.what());
    }
}

}  // namespace varbesov
