import init, { classGroup, cmPoints, siegelValues, builtinFields } from "./pkg/cmforms_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const out = $("out");

function coords(c) {
  return c.length === 1 ? c[0] : `(${c.join(", ")})`;
}

function formText(q) {
  return `[${q.map(coords).join(", ")}]`;
}

// decimal strings may exceed the double range, so shorten the text instead of parsing
function short(s, digits = 14) {
  const [m, e] = s.split("e");
  return e === undefined ? m.slice(0, digits + 2) : `${m.slice(0, digits + 2)}e${e}`;
}

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

function params() {
  return { field: $("field").value, n: Number($("level").value), prec: Number($("prec").value) };
}

function run(label, f) {
  $("status").textContent = `${label}…`;
  out.replaceChildren();
  // let the status line paint before the synchronous wasm call
  setTimeout(() => {
    const t = performance.now();
    try {
      f(params());
      $("status").textContent = `${label}: ${(performance.now() - t).toFixed(0)} ms`;
    } catch (e) {
      $("status").textContent = "";
      out.append(el("p", String(e.message ?? e), "error"));
    }
  }, 0);
}

function showGroup({ field, n }) {
  const r = JSON.parse(classGroup(field, n));
  out.append(el("p", `order ${r.order} (expected ${r.expected_order}), checks ${r.passed ? "passed" : "FAILED"}`));
  const list = el("ol");
  list.start = 0;
  r.elements.forEach((q) => list.append(el("li", formText(q))));
  out.append(list);
  const t = el("table");
  const head = el("tr");
  head.append(el("th", "·"));
  r.table.forEach((_, j) => head.append(el("th", String(j))));
  t.append(head);
  r.table.forEach((row, i) => {
    const tr = el("tr");
    tr.append(el("th", String(i)));
    row.forEach((k) => tr.append(el("td", String(k))));
    t.append(tr);
  });
  out.append(t);
}

const SVG = "http://www.w3.org/2000/svg";

function svg(tag, attrs) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  return e;
}

function showPoints({ field, n }) {
  const r = JSON.parse(cmPoints(field, n));
  const pts = r.points.map((p) => ({ ...p, x: parseFloat(p.re), y: parseFloat(p.im) }));
  const [w, h, pad] = [640, 360, 30];
  const xs = pts.map((p) => p.x);
  const ys = pts.map((p) => p.y);
  const x0 = Math.min(-1, ...xs), x1 = Math.max(1, ...xs);
  const y1 = Math.max(1, ...ys) * 1.1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - (y / y1) * (h - 2 * pad);
  const plot = svg("svg", { id: "plot", width: w, height: h });
  plot.append(svg("line", { x1: pad, y1: sy(0), x2: w - pad, y2: sy(0), stroke: "#888" }));
  plot.append(svg("line", { x1: sx(0), y1: pad, x2: sx(0), y2: h - pad, stroke: "#ccc" }));
  // boundary of the standard fundamental domain for SL2(Z)
  const arc = [];
  for (let t = Math.PI / 3; t <= (2 * Math.PI) / 3 + 1e-9; t += Math.PI / 60) arc.push(`${sx(Math.cos(t))},${sy(Math.sin(t))}`);
  plot.append(svg("polyline", { points: arc.join(" "), fill: "none", stroke: "#ccc" }));
  const colors = ["#1b6ca8", "#c0392b"];
  for (const p of pts) {
    const c = svg("circle", { cx: sx(p.x), cy: sy(p.y), r: 4, fill: colors[p.embedding % colors.length] });
    const tip = svg("title", {});
    tip.textContent = `class ${p.class}, embedding ${p.embedding + 1}: ${p.x.toFixed(6)} + ${p.y.toFixed(6)}i`;
    c.append(tip);
    plot.append(c);
  }
  out.append(el("p", `${pts.length} points φᵢ(ξ) for N = ${r.N}, g = ${r.g}`));
  out.append(plot);
}

function showSiegel({ field, n, prec }) {
  const r = JSON.parse(siegelValues(field, n, prec));
  out.append(el("p", `log2 separation ${r.log2_separation}, coefficients certified: ${r.certified}`));
  const t = el("table");
  const head = el("tr");
  ["class", "Re g(C)", "Im g(C)", "error"].forEach((s) => head.append(el("th", s)));
  t.append(head);
  r.values.forEach((v, i) => {
    const tr = el("tr");
    [String(i), short(v.re), short(v.im), v.error_bound].forEach((s) => tr.append(el("td", s)));
    t.append(tr);
  });
  out.append(t);
  out.append(el("p", "class polynomial, nearest x + y·ω, highest degree first:"));
  out.append(el("pre", r.nearest_integers.map(([x, y]) => `${x} + ${y}·ω`).join("\n")));
}

await init();
for (const name of builtinFields()) $("field").append(new Option(name, name));
$("field").value = "gauss";
$("run-group").onclick = () => run("class group", showGroup);
$("run-points").onclick = () => run("CM points", showPoints);
$("run-siegel").onclick = () => run("Siegel values", showSiegel);
