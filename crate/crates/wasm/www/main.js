import init, { exactCurve, peakPoints, histogram, intertwinerTable } from "./pkg/dunkl_lab_wasm.js";

const POINTS = 400;
const BIN = 0.05;

function formValues(form) {
  const data = Object.fromEntries(new FormData(form));
  for (const k of ["n", "nu", "t", "paths", "dt", "beta"]) {
    if (k in data) data[k] = Number(data[k]);
  }
  return data;
}

function drawDensity(canvas, lo, hi, curve, hist, peaks) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  const ymax = 1.1 * Math.max(...curve, ...(hist ?? [0]));
  const px = (v) => pad + ((v - lo) / (hi - lo)) * (w - 2 * pad);
  const py = (d) => h - pad - (d / ymax) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, py(0));
  ctx.lineTo(w - pad, py(0));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.font = "12px sans-serif";
  for (let v = Math.ceil(lo); v <= hi; v++) {
    ctx.fillText(String(v), px(v) - 3, h - pad + 15);
  }

  if (hist) {
    ctx.fillStyle = "rgba(204, 85, 85, 0.45)";
    hist.forEach((d, i) => {
      const a = lo + i * BIN;
      ctx.fillRect(px(a), py(d), px(a + BIN) - px(a), py(0) - py(d));
    });
  }

  ctx.strokeStyle = "#36a";
  for (const p of peaks) {
    ctx.beginPath();
    ctx.moveTo(px(p), py(0));
    ctx.lineTo(px(p), pad);
    ctx.stroke();
  }

  ctx.strokeStyle = "#111";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  curve.forEach((d, i) => {
    const v = lo + ((hi - lo) * i) / (POINTS - 1);
    i === 0 ? ctx.moveTo(px(v), py(d)) : ctx.lineTo(px(v), py(d));
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

function onDensity(event) {
  event?.preventDefault();
  const status = document.getElementById("density-status");
  status.className = "";
  try {
    const f = formValues(document.getElementById("density-form"));
    const peaks = Array.from(peakPoints(f.type, f.n, f.nu));
    const reach = Math.max(...peaks.map(Math.abs)) + 2;
    const lo = f.type === "A" ? -reach : 0;
    const hi = reach;
    const curve = Array.from(exactCurve(f.type, f.n, f.nu, f.t, lo, hi, POINTS));
    let hist = null;
    const started = performance.now();
    if (f.paths > 0) {
      hist = Array.from(histogram(f.type, f.n, 2, f.nu, f.t, f.dt, f.paths, 1, lo, hi, BIN));
    }
    drawDensity(document.getElementById("density-canvas"), lo, hi, curve, hist, peaks);
    const ms = (performance.now() - started).toFixed(0);
    status.textContent = `peak set: ${peaks.map((p) => p.toFixed(4)).join(", ")}` + (hist ? ` | simulation ${ms} ms` : "");
  } catch (e) {
    status.className = "error";
    status.textContent = String(e.message ?? e);
  }
}

function onIntertwine(event) {
  event?.preventDefault();
  const status = document.getElementById("intertwine-status");
  const table = document.getElementById("intertwine-table");
  status.className = "";
  status.textContent = "";
  table.replaceChildren();
  try {
    const f = formValues(document.getElementById("intertwine-form"));
    const terms = JSON.parse(intertwinerTable(f.type, f.lambda, f.n, f.beta, f.nu));
    const head = table.insertRow();
    for (const label of ["μ", "coefficient of m_μ"]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    for (const t of terms) {
      const row = table.insertRow();
      row.insertCell().textContent = `(${t.partition.join(",")})`;
      row.insertCell().textContent = t.monomial.toPrecision(10);
    }
  } catch (e) {
    status.className = "error";
    status.textContent = String(e.message ?? e);
  }
}

await init();
document.getElementById("density-form").addEventListener("submit", onDensity);
document.getElementById("intertwine-form").addEventListener("submit", onIntertwine);
onDensity();
onIntertwine();
