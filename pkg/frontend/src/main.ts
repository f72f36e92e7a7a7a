import { mountApp } from './app.js';

document.addEventListener('DOMContentLoaded', () => mountApp());
