import init, { curvatureProfile, bisectionalGrid, classifySummary } from "./pkg/finsler_lie_web.js";

const PROFILE_STEPS = 97;
const GRID_STEPS = 33;
const SAMPLES = 8;

const $ = (id) => document.getElementById(id);
const inputs = ["beta", "gamma", "epsilon", "phase"].map($);

function params() {
  const [beta, gamma, epsilon, phase] = inputs.map((el) => Number(el.value));
  return { beta, gamma, epsilon, phase };
}

function drawProfile(values) {
  const c = $("profile");
  const ctx = c.getContext("2d");
  const pad = 36;
  ctx.clearRect(0, 0, c.width, c.height);
  let lo = Math.min(...values), hi = Math.max(...values);
  if (hi - lo < 1e-9) { lo -= 1; hi += 1; }
  const x = (i) => pad + (i / (values.length - 1)) * (c.width - 2 * pad);
  const y = (k) => c.height - pad - ((k - lo) / (hi - lo)) * (c.height - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toFixed(4), 2, pad + 4);
  ctx.fillText(lo.toFixed(4), 2, c.height - pad + 4);
  ctx.fillText("0", pad - 3, c.height - pad + 14);
  ctx.fillText("π/2", c.width - pad - 8, c.height - pad + 14);

  ctx.strokeStyle = "#1f5fa8";
  ctx.lineWidth = 2;
  ctx.beginPath();
  values.forEach((k, i) => (i ? ctx.lineTo(x(i), y(k)) : ctx.moveTo(x(i), y(k))));
  ctx.stroke();
}

// diverging blue-white-red, symmetric about zero
function color(t) {
  const a = Math.min(1, Math.abs(t));
  const fade = Math.round(255 * (1 - a));
  return t >= 0 ? [255, fade, fade] : [fade, fade, 255];
}

function drawGrid(values, steps) {
  const c = $("grid");
  const ctx = c.getContext("2d");
  const img = ctx.createImageData(c.width, c.height);
  const scale = Math.max(...values.map(Math.abs)) || 1;
  for (let py = 0; py < c.height; py++) {
    const r = Math.min(steps - 1, Math.floor((py / c.height) * steps));
    for (let px = 0; px < c.width; px++) {
      const col = Math.min(steps - 1, Math.floor((px / c.width) * steps));
      const [R, G, B] = color(values[r * steps + col] / scale);
      const o = 4 * (py * c.width + px);
      img.data.set([R, G, B, 255], o);
    }
  }
  ctx.putImageData(img, 0, 0);
  $("range").textContent = `|B| ≤ ${scale.toFixed(4)} (red > 0, blue < 0)`;
}

function update() {
  const p = params();
  inputs.forEach((el) => (document.querySelector(`output[for=${el.id}]`).textContent = el.value));
  try {
    drawProfile(Array.from(curvatureProfile(p.beta, p.gamma, p.epsilon, p.phase, PROFILE_STEPS)));
    drawGrid(Array.from(bisectionalGrid(p.beta, p.gamma, p.epsilon, GRID_STEPS)), GRID_STEPS);
    $("error").textContent = "";
  } catch (e) {
    $("error").textContent = String(e);
  }
}

function classify() {
  const p = params();
  try {
    const s = JSON.parse(classifySummary(p.beta, p.gamma, p.epsilon, SAMPLES));
    const fmt = (x) => x.toExponential(3);
    $("summary").textContent = [
      `Kähler         ${s.kahler ? "yes" : "no "}  residual ${fmt(s.kahler_residual)}`,
      `weakly Kähler  ${s.weakly_kahler ? "yes" : "no "}  residual ${fmt(s.weakly_kahler_residual)}`,
      `Berwald        ${s.berwald ? "yes" : "no "}  residual ${fmt(s.berwald_residual)}`,
      `tolerance ${s.tol}`,
    ].join("\n");
  } catch (e) {
    $("summary").textContent = String(e);
  }
}

await init();
inputs.forEach((el) => el.addEventListener("input", update));
$("classify").addEventListener("click", classify);
update();
