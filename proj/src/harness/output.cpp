#include "rislink/harness/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rislink::harness {

namespace {

std::string number(double v) {
  if (std::isnan(v)) throw Error(ErrorKind::DomainError, "NaN in result table");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path);
}

std::string column_ref(const Table& t, const std::string& name) {
  const std::size_t offset = t.labels.empty() ? 1 : 2;
  return std::to_string(t.column(name) + offset);
}

}  // namespace

std::string format_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    bool first = true;
    if (!table.labels.empty()) {
      out << table.labels.at(r);
      first = false;
    }
    for (double v : table.rows[r]) {
      out << (first ? "" : ",") << number(v);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const Table& table, const std::string& path) { write_file(path, format_csv(table)); }

void write_meta(const Table& table, const std::string& config_text, const std::string& path) {
  nlohmann::ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["experiment"] = table.experiment;
  meta["rows"] = table.rows.size();
  meta["config_sha256"] = sha256_hex(config_text);
  meta["columns"] = table.header;
  write_file(path, meta.dump(2) + "\n");
}

std::string plot_script(const Table& t, const std::string& csv_name, double contour_level) {
  std::ostringstream g;
  g << "# gnuplot script for " << t.experiment << "\n";
  g << "set datafile separator ','\n";
  g << "set key autotitle columnhead\n";
  const std::string src = "'" + csv_name + "'";
  if (t.experiment == "sweep-distance") {
    // Powers are in dBm, so a logarithmic power axis is the linear dBm axis.
    g << "set xlabel 'd (m)'\nset ylabel 'received power (dBm)'\n";
    g << "set logscale x\nset grid\n";
    g << "plot " << src << " using 1:" << column_ref(t, "closed_form_dbm") << " with linespoints, \\\n"
      << "     " << src << " using 1:" << column_ref(t, "svd_dbm") << " with linespoints, \\\n"
      << "     " << src << " using 1:" << column_ref(t, "upper_bound_dbm") << " with lines dashtype 2\n";
  } else if (t.experiment == "sweep-plane") {
    g << "set xlabel 'x (m)'\nset ylabel 'y (m)'\nset cblabel 'received power (dBm)'\n";
    g << "set view map\nset size ratio -1\n";
    g << "splot " << src << " using 1:2:3 with image notitle\n";
  } else if (t.experiment == "line-profile") {
    g << "set xlabel 'x along line l (m)'\nset ylabel 'received power (dBm)'\nset y2label 'cross term (W)'\n";
    g << "set y2tics\nset grid\n";
    g << "plot " << src << " using 1:2 with lines, " << src << " using 1:3 axes x1y2 with lines\n";
  } else if (t.experiment == "sweep-wavelength") {
    g << "set xlabel 'wavelength (m)'\nset ylabel 'received power (dBm)'\nset grid\n";
    g << "plot " << src << " using 1:" << column_ref(t, "ris_dbm") << " with linespoints, \\\n"
      << "     " << src << " using 1:" << column_ref(t, "direct_dbm") << " with linespoints, \\\n"
      << "     " << src << " using 1:" << column_ref(t, "combined_dbm") << " with linespoints\n";
  } else if (t.experiment == "robustness") {
    const std::string level = number(contour_level);
    g << "set xlabel 'x (m)'\nset ylabel 'y (m)'\nset cblabel 'normalized power deviation'\n";
    g << "set view map\nset size ratio -1\nset dgrid3d " << "\n";
    g << "set contour base\nset cntrparam levels discrete " << level << "\nunset surface\n";
    g << "set table 'contour_" << level << ".dat'\n";
    g << "splot " << src << " using 1:2:" << column_ref(t, "deviation") << " notitle\n";
    g << "unset table\nunset dgrid3d\nset surface\nunset contour\n";
    g << "splot " << src << " using 1:2:" << column_ref(t, "deviation") << " with image notitle, \\\n"
      << "      'contour_" << level << ".dat' using 1:2:(0) with lines lc rgb 'white' title 'deviation = "
      << level << "'\n";
  } else {
    g << "plot " << src << " using 2 with linespoints\n";
  }
  return g.str();
}

void write_plot_script(const Table& table, const std::string& csv_name, const std::string& path,
                       double contour_level) {
  write_file(path, plot_script(table, csv_name, contour_level));
}

}  // namespace rislink::harness
