import "./style.css";
import { createApp } from "./app";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("missing #app mount node");
createApp(root);
