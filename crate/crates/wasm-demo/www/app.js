// Demo page driver. Expects the wasm-pack output in ./pkg (see the crate
// README for the build command).

import init, { datasets, analyze, rank_trajectories } from "./pkg/hetnet_wasm.js";

const COLORS = ["#d9480f", "#1864ab", "#2b8a3e", "#862e9c", "#e67700", "#0b7285"];
const SVG_NS = "http://www.w3.org/2000/svg";

const el = (id) => document.getElementById(id);

function svgEl(tag, attrs, parent) {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (parent) parent.appendChild(node);
  return node;
}

function clear(node) {
  while (node.firstChild) node.removeChild(node.firstChild);
}

function fmt(x, digits = 4) {
  return x === null || x === undefined ? "∞" : Number(x).toFixed(digits);
}

function drawNetwork(svg, data) {
  clear(svg);
  const width = 460;
  const height = 520;
  const layers = new Map();
  for (const node of data.nodes) {
    if (!layers.has(node.layer)) layers.set(node.layer, []);
    layers.get(node.layer).push(node);
  }
  const layerCount = layers.size;
  const pos = new Map();
  let col = 0;
  for (const [, nodes] of [...layers.entries()].sort((a, b) => a[0] - b[0])) {
    const x = layerCount === 1 ? width / 2 : 70 + (col * (width - 140)) / (layerCount - 1);
    nodes.forEach((node, i) => {
      const y = 30 + (i * (height - 60)) / Math.max(nodes.length - 1, 1);
      pos.set(node.label, { x, y, node });
    });
    col += 1;
  }
  for (const edge of data.edges) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) continue;
    svgEl("line", {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      stroke: "#c6cbd2",
      "stroke-width": Math.min(0.4 + 0.25 * edge.weight, 2.2),
      "stroke-opacity": 0.55,
    }, svg);
  }
  for (const { x, y, node } of pos.values()) {
    const color = COLORS[node.community % COLORS.length];
    const circle = svgEl("circle", { cx: x, cy: y, r: 7, fill: color, stroke: "#fff", "stroke-width": 1.2 }, svg);
    svgEl("title", {}, circle).textContent = `${node.label} (group ${node.community + 1})`;
    svgEl("text", {
      x: x + (node.layer === 0 && layerCount > 1 ? -11 : 11),
      y: y + 4,
      "text-anchor": node.layer === 0 && layerCount > 1 ? "end" : "start",
      "font-size": 10,
      fill: "#444",
    }, svg).textContent = node.label;
  }
}

function drawTrajectories(svg, data) {
  clear(svg);
  const width = 520;
  const height = 420;
  const left = 42;
  const right = width - 64;
  const top = 18;
  const bottom = height - 34;
  const grid = data.grid;
  const maxRank = Math.max(...data.nodes.map((n) => Math.max(...n.ranks)));

  const xAt = (k) => left + (k * (right - left)) / Math.max(grid.length - 1, 1);
  const yAt = (rank) => top + ((rank - 1) * (bottom - top)) / Math.max(maxRank - 1, 1);

  for (let r = 1; r <= maxRank; r += 1) {
    svgEl("line", { x1: left, y1: yAt(r), x2: right, y2: yAt(r), stroke: "#eef0f3" }, svg);
    svgEl("text", { x: left - 6, y: yAt(r) + 3, "text-anchor": "end", "font-size": 9, fill: "#98a2b3" }, svg)
      .textContent = r;
  }
  for (let k = 0; k < grid.length; k += 1) {
    svgEl("text", { x: xAt(k), y: bottom + 16, "text-anchor": "middle", "font-size": 9, fill: "#98a2b3" }, svg)
      .textContent = grid[k].toFixed(3);
  }
  svgEl("text", { x: (left + right) / 2, y: height - 4, "text-anchor": "middle", "font-size": 10, fill: "#667085" }, svg)
    .textContent = "α";

  for (const node of data.nodes) {
    const color = COLORS[node.community % COLORS.length];
    const points = node.ranks.map((rank, k) => `${xAt(k)},${yAt(rank)}`).join(" ");
    const line = svgEl("polyline", {
      points,
      fill: "none",
      stroke: color,
      "stroke-width": node.role === "leader" ? 2.6 : 1.4,
      "stroke-dasharray": node.role === "bridge" ? "5 3" : "none",
      "stroke-opacity": node.role === "stable" ? 0.45 : 0.95,
    }, svg);
    svgEl("title", {}, line).textContent =
      `${node.label}: ${node.role}` + (node.delta_rank ? ` (moved ${node.delta_rank} ranks)` : "");
    const lastRank = node.ranks[node.ranks.length - 1];
    svgEl("text", {
      x: right + 6,
      y: yAt(lastRank) + 3,
      "font-size": 9,
      fill: color,
      "font-weight": node.role === "stable" ? "normal" : "bold",
    }, svg).textContent = node.label + (node.role === "bridge" ? " ↗" : "");
  }
}

function refresh() {
  const dataset = el("dataset").value;
  const alpha = Number(el("alpha").value);
  el("alpha-value").textContent = alpha.toFixed(3);
  const errorBox = el("error");
  errorBox.textContent = "";

  const analysis = JSON.parse(analyze(dataset, alpha, el("series").checked, 3, el("rounding").checked));
  if (analysis.error) {
    errorBox.textContent = analysis.error;
    el("stat-k").textContent = "–";
    el("stat-q").textContent = "–";
    el("stat-nmi").textContent = "–";
  } else {
    el("stat-lambda").textContent = fmt(analysis.lambda_max);
    el("stat-bound").textContent = fmt(analysis.max_alpha);
    el("stat-k").textContent = analysis.communities;
    el("stat-q").textContent = fmt(analysis.q_normalized);
    el("stat-nmi").textContent = fmt(analysis.nmi_vs_truth);
    drawNetwork(el("network"), analysis);
  }

  const sweep = JSON.parse(rank_trajectories(dataset, Number(el("points").value)));
  if (sweep.error) {
    errorBox.textContent += ` ${sweep.error}`;
  } else {
    drawTrajectories(el("trajectories"), sweep);
  }
}

async function main() {
  await init();
  const select = el("dataset");
  for (const meta of JSON.parse(datasets())) {
    const option = document.createElement("option");
    option.value = meta.name;
    option.textContent = `${meta.name} (${meta.nodes} nodes, ${meta.edges} edges)`;
    select.appendChild(option);
  }
  for (const id of ["dataset", "alpha", "series", "rounding", "points"]) {
    el(id).addEventListener("input", refresh);
  }
  refresh();
}

main();
