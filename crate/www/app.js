// Vanilla JS glue for the orthog wasm demo. Build the module with
//   wasm-pack build crates/orthog-wasm --target web --out-dir ../../www/pkg
// then serve this directory with any static file server.

import init, {
  g_curve,
  kernel_curve,
  transfer_sweep,
  corpus_names,
} from "./pkg/orthog_wasm.js";

const $ = (id) => document.getElementById(id);

function drawXY(canvas, xs, ys, opts = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  ctx.clearRect(0, 0, W, H);
  if (xs.length === 0) return;
  const pad = 36;
  const xmin = Math.min(...xs), xmax = Math.max(...xs);
  let ymin = Math.min(...ys), ymax = Math.max(...ys);
  if (ymax - ymin < 1e-12) { ymax += 1; ymin -= 1; }
  const sx = (x) => pad + ((x - xmin) / (xmax - xmin)) * (W - 2 * pad);
  const sy = (y) => H - pad - ((y - ymin) / (ymax - ymin)) * (H - 2 * pad);

  ctx.strokeStyle = "#d9dee7";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0)); ctx.lineTo(W - pad, sy(0));
  ctx.moveTo(sx(Math.max(xmin, 0)), pad); ctx.lineTo(sx(Math.max(xmin, 0)), H - pad);
  ctx.stroke();

  ctx.fillStyle = "#5c6879";
  ctx.font = "11px system-ui";
  ctx.fillText(xmin.toPrecision(3), pad, H - pad + 14);
  ctx.fillText(xmax.toPrecision(3), W - pad - 30, H - pad + 14);
  ctx.fillText(ymax.toPrecision(3), 2, pad + 4);
  ctx.fillText(ymin.toPrecision(3), 2, H - pad);

  ctx.strokeStyle = opts.color || "#2563eb";
  ctx.lineWidth = 1.6;
  ctx.beginPath();
  xs.forEach((x, i) => {
    const px = sx(x), py = sy(ys[i]);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  });
  ctx.stroke();

  if (opts.points) {
    ctx.fillStyle = opts.color || "#2563eb";
    xs.forEach((x, i) => {
      ctx.beginPath();
      ctx.arc(sx(x), sy(ys[i]), 3, 0, 2 * Math.PI);
      ctx.fill();
    });
  }
  if (opts.refY !== undefined) {
    ctx.strokeStyle = "#9ca3af";
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(pad, sy(opts.refY));
    ctx.lineTo(W - pad, sy(opts.refY));
    ctx.stroke();
    ctx.setLineDash([]);
  }
}

function deinterleave(flat, stride = 2) {
  const cols = Array.from({ length: stride }, () => []);
  for (let i = 0; i < flat.length; i += stride)
    for (let j = 0; j < stride; j++) cols[j].push(flat[i + j]);
  return cols;
}

function updateG() {
  const errEl = $("g-err");
  errEl.textContent = "";
  try {
    const coeffs = $("g-coeffs").value
      .split(",").map((s) => parseFloat(s.trim())).filter((v) => !Number.isNaN(v));
    const flat = g_curve($("g-family").value, new Float64Array(coeffs), 257);
    const [xs, ys] = deinterleave(Array.from(flat));
    drawXY($("g-canvas"), xs, ys);
  } catch (e) {
    errEl.textContent = String(e);
  }
}

function updateKernel() {
  const errEl = $("k-err");
  errEl.textContent = "";
  const t = parseFloat($("k-t").value);
  const x0 = parseFloat($("k-x0").value);
  $("k-t-val").textContent = t.toFixed(2);
  $("k-x0-val").textContent = x0.toFixed(2);
  try {
    const flat = kernel_curve(
      parseFloat($("k-alpha").value), parseFloat($("k-beta").value), t, x0, 257);
    const [ys, ps] = deinterleave(Array.from(flat));
    drawXY($("k-canvas"), ys, ps, { color: "#059669" });
  } catch (e) {
    errEl.textContent = String(e);
  }
}

function refreshCorpus() {
  const dir = $("t-dir").value;
  const alpha = parseFloat($("t-alpha").value) || 0;
  const sel = $("t-fn");
  const prev = sel.value;
  sel.innerHTML = "";
  try {
    for (const name of corpus_names(dir, alpha)) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      sel.appendChild(opt);
    }
    if ([...sel.options].some((o) => o.value === prev)) sel.value = prev;
    else sel.value = sel.options[1] ? sel.options[1].value : sel.options[0].value;
  } catch (e) {
    $("t-err").textContent = String(e);
  }
}

function updateTransfer() {
  const errEl = $("t-err");
  errEl.textContent = "";
  try {
    const params = [1e2, 3e2, 1e3, 3e3, 1e4];
    const flat = transfer_sweep(
      $("t-kind").value, $("t-dir").value,
      parseFloat($("t-alpha").value) || 0, $("t-fn").value,
      new Float64Array(params));
    const [ps, vals, lims, errs] = deinterleave(Array.from(flat), 4);
    // log10 error against log10 parameter, with the limit as a guide line
    const logp = ps.map(Math.log10);
    const loge = errs.map((e) => Math.log10(Math.max(e, 1e-16)));
    drawXY($("t-canvas"), logp, loge, { color: "#dc2626", points: true });
    errEl.textContent =
      `value at ${ps.at(-1).toExponential(0)}: ${vals.at(-1).toPrecision(8)}; ` +
      `limit: ${lims.at(-1).toPrecision(8)} (plot: log10 error vs log10 parameter)`;
    errEl.style.color = "#5c6879";
  } catch (e) {
    errEl.textContent = String(e);
    errEl.style.color = "#b91c1c";
  }
}

async function main() {
  await init();
  $("status").textContent = "";
  for (const id of ["g-family", "g-coeffs"])
    $(id).addEventListener("change", updateG);
  for (const id of ["k-alpha", "k-beta", "k-t", "k-x0"])
    $(id).addEventListener("input", updateKernel);
  $("t-dir").addEventListener("change", () => { refreshCorpus(); updateTransfer(); });
  $("t-alpha").addEventListener("change", () => { refreshCorpus(); updateTransfer(); });
  for (const id of ["t-kind", "t-fn"])
    $(id).addEventListener("change", updateTransfer);
  refreshCorpus();
  updateG();
  updateKernel();
  updateTransfer();
}

main().catch((e) => { $("status").textContent = "failed to load wasm: " + e; });
