// Built by `wasm-pack build crates/web --target web --out-dir www/pkg`.
import init, { fit_sine, kernel_heatmap, train_planted } from "./pkg/densekit_web.js";

const $ = (id) => document.getElementById(id);

function bind(ids, format, onChange) {
  for (const id of ids) {
    const input = $(id);
    const out = input.parentElement.querySelector("output");
    const show = () => { out.textContent = format[id] ? format[id](+input.value) : input.value; };
    show();
    input.addEventListener("input", () => { show(); onChange(); });
  }
}

function frame(ctx, xs, ys, pad = 30) {
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const { width: w, height: h } = ctx.canvas;
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0 || 1)) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  return { sx, sy };
}

function line(ctx, xs, ys, sx, sy, color, width = 2) {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function heat(ctx, values, rows, cols, lo, hi, mask) {
  const { width: w, height: h } = ctx.canvas;
  const cw = w / cols, ch = h / rows;
  ctx.clearRect(0, 0, w, h);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const t = Math.min(1, Math.max(0, (values[r * cols + c] - lo) / (hi - lo || 1)));
      const dim = mask && !mask[r * cols + c] ? 0.45 : 1;
      ctx.fillStyle = `rgb(${Math.round(255 * t * dim)},${Math.round(90 * dim)},${Math.round(255 * (1 - t) * dim)})`;
      ctx.fillRect(c * cw, r * ch, Math.ceil(cw), Math.ceil(ch));
    }
  }
}

function report(id, fn) {
  const status = $(id);
  try {
    status.classList.remove("error");
    status.textContent = fn();
  } catch (e) {
    status.classList.add("error");
    status.textContent = String(e.message ?? e);
  }
}

function drawSine() {
  report("sine-status", () => {
    const t0 = performance.now();
    const fit = fit_sine(10 ** +$("krr-lambda").value, +$("krr-sigma").value, +$("krr-n").value,
      +$("krr-noise").value, +$("krr-seed").value, 400);
    const ms = performance.now() - t0;
    const ctx = $("sine").getContext("2d");
    const gx = fit.grid_x, gp = fit.grid_pred, gt = fit.grid_truth, tx = fit.train_x, ty = fit.train_y;
    const { sx, sy } = frame(ctx, [...gx], [...gp, ...gt, ...ty]);
    line(ctx, gx, gt, sx, sy, "#aaa");
    line(ctx, gx, gp, sx, sy, "#c33");
    ctx.fillStyle = "#236";
    tx.forEach((x, i) => { ctx.beginPath(); ctx.arc(sx(x), sy(ty[i]), 2, 0, 2 * Math.PI); ctx.fill(); });
    const err = fit.max_abs_error;
    fit.free();
    return `max |pred − sin(2πx)| = ${err.toExponential(3)}   fit+predict ${ms.toFixed(1)} ms`;
  });
}

function drawHeat() {
  report("heat-status", () => {
    const n = +$("heat-n").value;
    const k = kernel_heatmap(+$("heat-sigma").value, n);
    heat($("heat").getContext("2d"), k, n, n, 0, 1);
    return `${n}×${n} entries in (0, 1], unit diagonal`;
  });
}

let mfPending = 0;
function drawMf() {
  clearTimeout(mfPending);
  mfPending = setTimeout(() => report("mf-status", () => {
    const t0 = performance.now();
    const run = train_planted(+$("mf-users").value, +$("mf-items").value, +$("mf-rank").value,
      +$("mf-density").value, +$("mf-factors").value, +$("mf-lr").value, +$("mf-reg").value,
      +$("mf-epochs").value, +$("mf-seed").value);
    const ms = performance.now() - t0;
    const rmse = run.rmse;
    const epochs = rmse.map((_, i) => i + 1);
    const ctx = $("rmse").getContext("2d");
    const { sx, sy } = frame(ctx, epochs, [0, ...rmse]);
    line(ctx, epochs, rmse, sx, sy, "#2a6");
    const truth = run.truth, pred = run.prediction, mask = run.observed;
    const lo = Math.min(...truth), hi = Math.max(...truth);
    heat($("mf-truth").getContext("2d"), truth, run.n_users, run.n_items, lo, hi, mask);
    heat($("mf-pred").getContext("2d"), pred, run.n_users, run.n_items, lo, hi);
    run.free();
    return `train RMSE ${rmse[0].toFixed(4)} → ${rmse[rmse.length - 1].toFixed(4)} in ${ms.toFixed(0)} ms ` +
      `(left: planted, dimmed = unobserved; right: prediction)`;
  }), 60);
}

await init();

bind(["krr-lambda", "krr-sigma", "krr-n", "krr-noise", "krr-seed"],
  { "krr-lambda": (v) => `${v}  (λ = ${(10 ** v).toExponential(1)})` }, drawSine);
bind(["heat-sigma", "heat-n"], {}, drawHeat);
bind(["mf-users", "mf-items", "mf-rank", "mf-density", "mf-factors", "mf-lr", "mf-reg", "mf-epochs", "mf-seed"],
  {}, drawMf);

drawSine();
drawHeat();
drawMf();
