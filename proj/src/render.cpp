#include "gridrl/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gridrl {

namespace {

constexpr double kCell = 44.0;
constexpr double kMargin = 22.0;
constexpr double kCaptionBand = 34.0;

constexpr const char* kFlowColor = "#2b6cb8";     // greedy flow arrows
constexpr const char* kWallHitColor = "#8a5a2b";  // clamped transitions
constexpr const char* kGoalColor = "#cc2222";
constexpr const char* kAttractorColor = "#f2a33c";
constexpr const char* kWallFill = "#4a4a4a";

std::string f9(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9f", x);
    return buf;
}

double cx(const State& s) { return kMargin + (s.x + 0.5) * kCell; }
double cy(const State& s) { return kMargin + (s.y + 0.5) * kCell; }

void line_attr(std::ostringstream& out, const char* name, double v) {
    out << ' ' << name << "=\"" << f9(v) << '"';
}

// Five-pointed star polygon centered on the goal cell.
std::string star_points(double x, double y, double outer, double inner) {
    std::ostringstream pts;
    for (int k = 0; k < 10; ++k) {
        const double radius = (k % 2 == 0) ? outer : inner;
        const double angle = -M_PI / 2.0 + k * M_PI / 5.0;
        if (k > 0) {
            pts << ' ';
        }
        pts << f9(x + radius * std::cos(angle)) << ','
            << f9(y + radius * std::sin(angle));
    }
    return pts.str();
}

}  // namespace

std::string policy_map_filename(const std::string& condition, int seed,
                                const State& goal) {
    return condition + "_s" + std::to_string(seed) + "_g" +
           std::to_string(goal.x) + "_" + std::to_string(goal.y) + ".svg";
}

std::string render_policy_map(const SuccessorMap& m,
                              const GraphDecomposition& d,
                              const GoalRecord& r, const GridSpec& grid) {
    const StateIndex index(grid);
    const double width = 2.0 * kMargin + grid.width() * kCell;
    const double height = 2.0 * kMargin + grid.height() * kCell + kCaptionBand;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f9(width)
        << "\" height=\"" << f9(height) << "\" viewBox=\"0 0 " << f9(width)
        << ' ' << f9(height) << "\">\n";
    out << "<defs>\n"
        << "<marker id=\"arrow-flow\" viewBox=\"0 0 10 10\" refX=\"9\" "
           "refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
           "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
        << kFlowColor << "\"/></marker>\n"
        << "<marker id=\"arrow-wallhit\" viewBox=\"0 0 10 10\" refX=\"9\" "
           "refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
           "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
        << kWallHitColor << "\"/></marker>\n"
        << "</defs>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << f9(width) << "\" height=\""
        << f9(height) << "\" fill=\"#ffffff\"/>\n";

    // Grid lines.
    for (int gx = 0; gx <= grid.width(); ++gx) {
        const double x = kMargin + gx * kCell;
        out << "<line class=\"grid\"";
        line_attr(out, "x1", x);
        line_attr(out, "y1", kMargin);
        line_attr(out, "x2", x);
        line_attr(out, "y2", kMargin + grid.height() * kCell);
        out << " stroke=\"#d8d8d8\" stroke-width=\"1\"/>\n";
    }
    for (int gy = 0; gy <= grid.height(); ++gy) {
        const double y = kMargin + gy * kCell;
        out << "<line class=\"grid\"";
        line_attr(out, "x1", kMargin);
        line_attr(out, "y1", y);
        line_attr(out, "x2", kMargin + grid.width() * kCell);
        line_attr(out, "y2", y);
        out << " stroke=\"#d8d8d8\" stroke-width=\"1\"/>\n";
    }

    // Wall cells: filled blocks, no glyphs inside.
    for (const State& w : grid.walls()) {
        out << "<rect class=\"wall\"";
        line_attr(out, "x", kMargin + w.x * kCell);
        line_attr(out, "y", kMargin + w.y * kCell);
        line_attr(out, "width", kCell);
        line_attr(out, "height", kCell);
        out << " fill=\"" << kWallFill << "\"/>\n";
    }

    // Non-goal attractor states, marked beneath the glyphs.
    for (const Attractor& a : d.attractors) {
        if (a.kind == AttractorKind::Goal) {
            continue;
        }
        for (std::int32_t si : a.states) {
            const State s = index.state(si);
            out << "<circle class=\"attractor\"";
            line_attr(out, "cx", cx(s));
            line_attr(out, "cy", cy(s));
            line_attr(out, "r", 0.34 * kCell);
            out << " fill=\"" << kAttractorColor << "\" opacity=\"0.45\"/>\n";
        }
    }

    // One glyph per valid state.
    for (int si = 0; si < index.size(); ++si) {
        const State s = index.state(si);
        if (si == m.goal_index) {
            out << "<polygon class=\"goal-star\" points=\""
                << star_points(cx(s), cy(s), 0.36 * kCell, 0.15 * kCell)
                << "\" fill=\"" << kGoalColor << "\"/>\n";
            continue;
        }
        const std::int32_t ti = m.next[si];
        if (ti == si) {
            // Clamped transition: the chosen move hit a wall or the
            // boundary, so the state loops onto itself.
            const double r0 = 0.16 * kCell;
            out << "<circle class=\"loop\"";
            line_attr(out, "cx", cx(s));
            line_attr(out, "cy", cy(s));
            line_attr(out, "r", r0);
            out << " fill=\"none\" stroke=\"" << kWallHitColor
                << "\" stroke-width=\"2\"/>\n";
            out << "<polygon class=\"loop-head\" points=\""
                << f9(cx(s) + r0) << ',' << f9(cy(s) - 3.0) << ' '
                << f9(cx(s) + r0 + 3.5) << ',' << f9(cy(s) + 3.0) << ' '
                << f9(cx(s) + r0 - 3.5) << ',' << f9(cy(s) + 3.0)
                << "\" fill=\"" << kWallHitColor << "\"/>\n";
            continue;
        }
        const State t = index.state(ti);
        const double dx = cx(t) - cx(s);
        const double dy = cy(t) - cy(s);
        const double x1 = cx(s) + 0.18 * dx;
        const double y1 = cy(s) + 0.18 * dy;
        const double x2 = cx(s) + 0.74 * dx;
        const double y2 = cy(s) + 0.74 * dy;
        out << "<line class=\"flow\"";
        line_attr(out, "x1", x1);
        line_attr(out, "y1", y1);
        line_attr(out, "x2", x2);
        line_attr(out, "y2", y2);
        out << " stroke=\"" << kFlowColor
            << "\" stroke-width=\"2.5\" marker-end=\"url(#arrow-flow)\"/>\n";
    }

    // Caption.
    char caption[128];
    std::snprintf(caption, sizeof(caption), "S=%.3f Sup=%d C=%.3f F=%.3f",
                  r.succ_h, r.lgs_count, r.comp_basin, r.fragmentation);
    out << "<text class=\"caption\"";
    line_attr(out, "x", kMargin);
    line_attr(out, "y", kMargin + grid.height() * kCell + 24.0);
    out << " font-family=\"monospace\" font-size=\"16\" fill=\"#222222\">"
        << caption << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace gridrl
